#pragma once

#include <string>

#include "fad/experiments.hpp"
#include "fad/integrators.hpp"

namespace fad {

/// Trace CSV: header "step,time,f,grad_norm,xi,H_tilde,G", plus
/// per-component x/p columns when the dimension is <= 6.
void write_trace_csv(const std::string& path, const Trace& trace, int dim);

/// Sweep CSV: "axis1,axis2,mean_iters,converged_frac,n_ics".
void write_sweep_csv(const std::string& path, const SweepResult& result);

/// Cluster CSV: "run,seed,init_energy,final_energy,min_energy,success".
void write_cluster_csv(const std::string& path, const ClusterBatchResult& r);

/// Formats a double with round-trip precision.
std::string format_double(double v);

}  // namespace fad
