#include "fad/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "fad/rng.hpp"
#include "fad/xyz.hpp"

namespace fad {

std::string run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIter: return "max-iter";
    case RunStatus::Diverged: return "diverged";
  }
  return "?";
}

RunRecord run_to_convergence(const SchemeConfig& method, const Objective& obj,
                             const Vector& ic, double tol,
                             std::int64_t max_iter) {
  ExtendedState s0;
  s0.x = ic;
  s0.p = Vector::Zero(obj.dim());

  const auto t0 = std::chrono::steady_clock::now();
  Trace tr = integrate(s0, obj, method, StoppingRule::distance(tol), max_iter,
                       -1);
  const auto t1 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.seed = method.seed;
  rec.ic = ic;
  rec.config = method;
  rec.iterations = tr.iterations;
  switch (tr.status) {
    case Trace::Status::Converged: rec.status = RunStatus::Converged; break;
    case Trace::Status::MaxSteps: rec.status = RunStatus::MaxIter; break;
    case Trace::Status::Diverged: rec.status = RunStatus::Diverged; break;
  }
  rec.final_f = tr.records.back().f;
  rec.final_grad_norm = tr.records.back().grad_norm;
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  rec.wall_steps_per_second =
      secs > 0.0 ? static_cast<double>(tr.iterations) / secs : 0.0;
  return rec;
}

std::vector<Vector> InitialConditionSet::points() const {
  if (!grid) {
    if (single.size() == 0)
      throw InputError("InitialConditionSet: no single point set");
    return {single};
  }
  if (n_per_axis < 1) throw InputError("InitialConditionSet: bad grid size");
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis);
  // Cell centers, so endpoints of the open box are excluded.
  const double hx = (x_hi - x_lo) / n_per_axis;
  const double hy = (y_hi - y_lo) / n_per_axis;
  for (int i = 0; i < n_per_axis; ++i) {
    for (int j = 0; j < n_per_axis; ++j) {
      Vector v(2);
      v << x_lo + (i + 0.5) * hx, y_lo + (j + 0.5) * hy;
      pts.push_back(std::move(v));
    }
  }
  return pts;
}

namespace {

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("FADOPT_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(k) for k in [0, n) on up to `jobs` threads. Exceptions are
// rethrown on the calling thread.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) fn(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepResult sweep(const SweepSpec& spec, const Objective& obj) {
  if (spec.axis1.empty() || spec.axis2.empty())
    throw InputError("sweep: empty axis");
  const auto ics = spec.ics.points();
  const int n1 = static_cast<int>(spec.axis1.size());
  const int n2 = static_cast<int>(spec.axis2.size());

  SweepResult res;
  res.axis1 = spec.axis1;
  res.axis2 = spec.axis2;
  res.mean_iters.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  res.converged_frac.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  res.n_ics = static_cast<int>(ics.size());

  parallel_for(n1 * n2, resolve_jobs(spec.jobs), [&](int cell) {
    const int i1 = cell / n2, i2 = cell % n2;
    SchemeConfig cfg = spec.base;
    if (spec.plane == SweepPlane::GammaDt) {
      cfg.params.gamma = spec.axis1[i1];
      cfg.dt = spec.axis2[i2];
    } else {
      cfg.params.mu = spec.axis1[i1];
      cfg.params.alpha = spec.axis2[i2];
    }
    double iter_sum = 0.0;
    int converged = 0;
    for (const auto& ic : ics) {
      const RunRecord r =
          run_to_convergence(cfg, obj, ic, spec.tol, spec.max_iter);
      if (r.status == RunStatus::Converged) {
        iter_sum += static_cast<double>(r.iterations);
        ++converged;
      } else {
        iter_sum += static_cast<double>(spec.max_iter);
      }
    }
    res.mean_iters[cell] = iter_sum / static_cast<double>(ics.size());
    res.converged_frac[cell] =
        static_cast<double>(converged) / static_cast<double>(ics.size());
  });
  return res;
}

std::vector<double> ratio_map(const std::vector<double>& a,
                              const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("ratio_map: size mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = b[i] == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                         : a[i] / b[i];
  return out;
}

std::string cluster_system_name(ClusterSystem s) {
  switch (s) {
    case ClusterSystem::Lj38: return "lj38";
    case ClusterSystem::Lj75: return "lj75";
    case ClusterSystem::Morse64: return "morse64";
  }
  return "?";
}

Objective cluster_objective(const ClusterExperimentSpec& spec) {
  ClusterSpec cs;
  switch (spec.system) {
    case ClusterSystem::Lj38:
      cs.n_atoms = 38;
      cs.pair_kind = PairKind::LennardJones;
      cs.reference_min_energy = -173.928427;
      break;
    case ClusterSystem::Lj75:
      cs.n_atoms = 75;
      cs.pair_kind = PairKind::LennardJones;
      cs.reference_min_energy = -397.492331;
      break;
    case ClusterSystem::Morse64:
      cs.n_atoms = 64;
      cs.pair_kind = PairKind::Morse;
      cs.morse_a = 3.0;
      cs.morse_r0 = 1.0;
      cs.reference_min_energy = -512.83;
      break;
  }
  Objective obj = make_cluster(cs);
  // Only the energy reference is known; the success threshold and the
  // Lyapunov offsets are measured against it.
  if (cs.reference_min_energy)
    obj.set_reference_energy(*cs.reference_min_energy);
  return obj;
}

Vector cluster_reference_positions(const ClusterExperimentSpec& spec) {
  switch (spec.system) {
    case ClusterSystem::Lj38:
      return read_xyz(spec.data_dir + "/lj38.xyz");
    case ClusterSystem::Lj75:
      return read_xyz(spec.data_dir + "/lj75.xyz");
    case ClusterSystem::Morse64: {
      const int n = spec.lattice_n;
      Vector q(3 * n * n * n);
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            q[k++] = i;
            q[k++] = j;
            q[k++] = l;
          }
      return q;
    }
  }
  throw InputError("cluster_reference_positions: unknown system");
}

ExtendedState init_cluster(const ClusterExperimentSpec& spec,
                           const Objective& obj, int run_index) {
  ExtendedState s;
  s.x = cluster_reference_positions(spec);
  s.p = Vector::Zero(obj.dim());
  s.xi = 0.0;
  Rng rng(spec.base_seed + static_cast<std::uint64_t>(run_index));
  for (int k = 0; k < spec.equil_steps; ++k)
    baoab_step(s, obj, spec.equil_gamma, spec.equil_beta_inv, spec.equil_dt,
               rng);
  if (spec.momentum_policy == MomentumPolicy::Zeroed) s.p.setZero();
  return s;
}

ClusterBatchResult cluster_batch(const ClusterExperimentSpec& spec) {
  if (spec.n_runs < 1) throw InputError("cluster_batch: n_runs must be >= 1");
  if (spec.success_threshold <= 0.0 || spec.success_threshold > 0.1)
    throw InputError("cluster_batch: success threshold must be in (0, 0.1]");
  const Objective obj = cluster_objective(spec);
  const double ref = obj.min_energy();

  ClusterBatchResult result;
  result.runs.resize(spec.n_runs);

  parallel_for(spec.n_runs, resolve_jobs(spec.jobs), [&](int run) {
    ClusterRun r;
    r.run = run;
    r.seed = spec.base_seed + static_cast<std::uint64_t>(run);
    ExtendedState s = init_cluster(spec, obj, run);
    r.init_energy = obj.value(s.x);
    r.min_energy = r.init_energy;
    r.final_energy = r.init_energy;
    r.final_q = s.x;

    Integrator integ(obj, spec.optimizer);
    for (std::int64_t k = 0; k < spec.opt_steps; ++k) {
      integ.step(s);
      if (!s.finite()) break;  // keep the last finite configuration
      const double f = obj.value(s.x);
      r.final_energy = f;
      r.final_q = s.x;
      if (f < r.min_energy) r.min_energy = f;
    }
    r.success =
        (r.final_energy - ref) <= spec.success_threshold * std::abs(ref);
    result.runs[run] = std::move(r);
  });

  result.sorted_finals.reserve(spec.n_runs);
  int n_success = 0;
  for (const auto& r : result.runs) {
    result.sorted_finals.push_back(r.final_energy);
    if (r.success) ++n_success;
  }
  std::sort(result.sorted_finals.begin(), result.sorted_finals.end());
  result.success_fraction =
      static_cast<double>(n_success) / static_cast<double>(spec.n_runs);
  return result;
}

}  // namespace fad
