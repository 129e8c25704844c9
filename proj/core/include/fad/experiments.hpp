#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fad/integrators.hpp"
#include "fad/potentials.hpp"

namespace fad {

enum class RunStatus { Converged, MaxIter, Diverged };

std::string run_status_name(RunStatus s);

struct RunRecord {
  std::uint64_t seed = 0;
  Vector ic;
  SchemeConfig config;
  std::int64_t iterations = 0;
  RunStatus status = RunStatus::MaxIter;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  double wall_steps_per_second = 0.0;
};

/// Wraps integrate() with the distance stopping rule of the sweeps.
RunRecord run_to_convergence(const SchemeConfig& method, const Objective& obj,
                             const Vector& ic, double tol,
                             std::int64_t max_iter);

enum class SweepPlane { GammaDt, MuAlpha };

struct InitialConditionSet {
  // Single point, or an n x n grid over [x_lo,x_hi] x [y_lo,y_hi] (2-d
  // objectives only).
  bool grid = false;
  Vector single;
  double x_lo = -2.0, x_hi = 2.0;
  double y_lo = -1.0, y_hi = 3.0;
  int n_per_axis = 40;

  std::vector<Vector> points() const;
};

struct SweepSpec {
  SweepPlane plane = SweepPlane::GammaDt;
  std::vector<double> axis1;  // gamma (or mu)
  std::vector<double> axis2;  // dt (or alpha)
  SchemeConfig base;          // fixed params, scheme and coupling
  InitialConditionSet ics;
  double tol = 1e-4;
  std::int64_t max_iter = 1500;
  int jobs = 0;  // 0 = hardware concurrency
};

struct SweepResult {
  std::vector<double> axis1, axis2;
  // Row-major [i1 * n2 + i2]: mean iterations (non-converged counted at
  // max_iter) and fraction of converged ICs.
  std::vector<double> mean_iters;
  std::vector<double> converged_frac;
  int n_ics = 0;
};

SweepResult sweep(const SweepSpec& spec, const Objective& obj);

/// Elementwise a/b; cells with b = 0 yield NaN.
std::vector<double> ratio_map(const std::vector<double>& a,
                              const std::vector<double>& b);

enum class ClusterSystem { Lj38, Lj75, Morse64 };

std::string cluster_system_name(ClusterSystem s);

enum class MomentumPolicy { Thermalized, Zeroed };

struct ClusterExperimentSpec {
  ClusterSystem system = ClusterSystem::Morse64;
  // Langevin equilibration (BAOAB) applied to the reference structure
  // (lj38/lj75) or to the Cartesian lattice (morse64).
  int equil_steps = 400;
  double equil_dt = 1e-3;
  double equil_beta_inv = 2.0;
  double equil_gamma = 1.0;
  int lattice_n = 4;  // morse64 lattice {0..lattice_n-1}^3
  MomentumPolicy momentum_policy = MomentumPolicy::Zeroed;
  SchemeConfig optimizer;
  std::int64_t opt_steps = 50000;
  int n_runs = 20;
  std::uint64_t base_seed = 0;
  double success_threshold = 0.01;  // relative to reference_min_energy
  std::string data_dir = "data";    // fixture location
  int jobs = 0;
};

/// Builds the seeded initial state for one run: reference structure (or
/// lattice), Langevin equilibration, momentum policy applied, xi = 0.
ExtendedState init_cluster(const ClusterExperimentSpec& spec,
                           const Objective& obj, int run_index);

/// Loads the objective for a cluster system; reference minimum energies:
/// lj38 -173.928427, lj75 -397.492331, morse64 -512.83.
Objective cluster_objective(const ClusterExperimentSpec& spec);

/// Reference (minimum) configuration: fixture coordinates for lj38/lj75,
/// the Cartesian lattice for morse64.
Vector cluster_reference_positions(const ClusterExperimentSpec& spec);

struct ClusterRun {
  int run = 0;
  std::uint64_t seed = 0;
  double init_energy = 0.0;
  double final_energy = 0.0;
  double min_energy = 0.0;  // minimum f along the trajectory
  bool success = false;
  Vector final_q;
};

struct ClusterBatchResult {
  std::vector<ClusterRun> runs;        // in run order
  std::vector<double> sorted_finals;   // final energies, ascending
  double success_fraction = 0.0;
};

ClusterBatchResult cluster_batch(const ClusterExperimentSpec& spec);

}  // namespace fad
