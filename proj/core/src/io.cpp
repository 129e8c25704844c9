#include "fad/io.hpp"

#include <charconv>
#include <fstream>

namespace fad {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_trace_csv(const std::string& path, const Trace& trace, int dim) {
  std::ofstream out = open_out(path);
  const bool components = dim <= 6;
  out << "step,time,f,grad_norm,xi,H_tilde,G";
  if (components) {
    for (int i = 0; i < dim; ++i) out << ",x" << i;
    for (int i = 0; i < dim; ++i) out << ",p" << i;
  }
  out << "\n";
  for (const auto& r : trace.records) {
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.f)
        << ',' << format_double(r.grad_norm) << ',' << format_double(r.xi)
        << ',' << format_double(r.h_tilde) << ',' << format_double(r.g);
    if (components) {
      for (int i = 0; i < dim; ++i) out << ',' << format_double(r.x[i]);
      for (int i = 0; i < dim; ++i) out << ',' << format_double(r.p[i]);
    }
    out << "\n";
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out = open_out(path);
  out << "axis1,axis2,mean_iters,converged_frac,n_ics\n";
  const auto n2 = result.axis2.size();
  for (std::size_t i = 0; i < result.axis1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      out << format_double(result.axis1[i]) << ','
          << format_double(result.axis2[j]) << ','
          << format_double(result.mean_iters[i * n2 + j]) << ','
          << format_double(result.converged_frac[i * n2 + j]) << ','
          << result.n_ics << "\n";
    }
  }
}

void write_cluster_csv(const std::string& path, const ClusterBatchResult& r) {
  std::ofstream out = open_out(path);
  out << "run,seed,init_energy,final_energy,min_energy,success\n";
  for (const auto& run : r.runs) {
    out << run.run << ',' << run.seed << ','
        << format_double(run.init_energy) << ','
        << format_double(run.final_energy) << ','
        << format_double(run.min_energy) << ',' << (run.success ? 1 : 0)
        << "\n";
  }
}

}  // namespace fad
