#include "fad/diagnostics.hpp"

#include <cmath>

#include "json.hpp"

namespace fad {

namespace {

double functional_value(const TraceRecord& r, const Objective& obj,
                        Functional functional, double mu, double eps) {
  switch (functional) {
    case Functional::HTilde:
      return r.h_tilde;
    case Functional::G:
      return r.g;
    case Functional::WEps: {
      ExtendedState s;
      s.x = r.x;
      s.p = r.p;
      s.xi = r.xi;
      return lyapunov_W(s, obj, mu, eps);
    }
  }
  throw InputError("unknown functional");
}

}  // namespace

MonotonicityReport check_monotone(const Trace& trace, const Objective& obj,
                                  Functional functional, double tol, double mu,
                                  double eps) {
  MonotonicityReport rep;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto& rec : trace.records) {
    const double v = functional_value(rec, obj, functional, mu, eps);
    if (have_prev) {
      const double inc = v - prev;
      if (inc > tol) {
        ++rep.n_violations;
        if (inc > rep.max_violation) rep.max_violation = inc;
        if (!rep.first_violation_step) rep.first_violation_step = rec.step;
      }
    }
    prev = v;
    have_prev = true;
  }
  return rep;
}

bool is_equilibrium(const ExtendedState& s, const Objective& obj, double tol) {
  return s.p.norm() <= tol && obj.gradient(s.x).norm() <= tol &&
         std::abs(s.xi) <= tol;
}

RateFit fit_rate(const Trace& trace, const Objective& obj,
                 Functional functional,
                 std::optional<std::pair<std::int64_t, std::int64_t>> window,
                 double mu, double eps) {
  const auto n = static_cast<std::int64_t>(trace.records.size());
  if (n < 3) throw InputError("fit_rate: trace too short");
  std::int64_t lo = n / 2, hi = n - 1;
  if (window) {
    lo = window->first;
    hi = window->second;
    if (lo < 0 || hi >= n || hi - lo < 2)
      throw InputError("fit_rate: bad window");
  }

  // Least squares of log v on time.
  double st = 0, sl = 0, stt = 0, stl = 0, sll = 0;
  std::int64_t m = 0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const double v =
        functional_value(trace.records[i], obj, functional, mu, eps);
    if (!(v > 0.0))
      throw NumericalError("fit_rate: functional not positive on window");
    const double t = trace.records[i].time;
    const double l = std::log(v);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    sll += l * l;
    ++m;
  }
  const double denom = m * stt - st * st;
  if (denom == 0.0) throw NumericalError("fit_rate: degenerate time window");
  const double slope = (m * stl - st * sl) / denom;
  const double var_l = m * sll - sl * sl;

  RateFit fit;
  fit.kappa = -slope;
  fit.r_squared =
      var_l == 0.0 ? 1.0 : (m * stl - st * sl) * (m * stl - st * sl) /
                               (denom * var_l);
  fit.window_start = trace.records[lo].step;
  fit.window_end = trace.records[hi].step;
  return fit;
}

namespace {

Vector final_x_at_time(const SchemeConfig& cfg, const Objective& obj,
                       const ExtendedState& s0, double T, double dt) {
  SchemeConfig c = cfg;
  c.dt = dt;
  const auto steps = static_cast<std::int64_t>(std::llround(T / dt));
  Trace tr = integrate(s0, obj, c, StoppingRule::none(), steps, -1);
  if (tr.status == Trace::Status::Diverged)
    throw NumericalError("measure_order: trajectory diverged at dt=" +
                         std::to_string(dt));
  return tr.records.back().x;
}

}  // namespace

OrderStudy measure_order(const SchemeConfig& cfg, const Objective& obj,
                         const ExtendedState& s0, double T,
                         const std::vector<double>& dt_list) {
  if (dt_list.size() < 2) throw InputError("measure_order: need >= 2 dts");
  double dt_min = dt_list.front();
  for (double dt : dt_list) dt_min = std::min(dt_min, dt);

  // Reference: the multiple-time-stepping C' scheme at dt_min/16 with a very
  // fine inner loop when the coupling supports it, otherwise the scheme
  // itself at dt_min/16.
  SchemeConfig ref = cfg;
  const bool cprime_ok =
      cfg.coupling.kind == CouplingKind::Identity ||
      (cfg.coupling.kind == CouplingKind::ProjectiveMixture &&
       cfg.coupling.normalized && cfg.coupling.lambda1 == 0.0 &&
       cfg.coupling.lambda2 == 1.0);
  if ((cfg.scheme == Scheme::FadDabcbad ||
       cfg.scheme == Scheme::FadAltCprime) &&
      cprime_ok) {
    ref.scheme = Scheme::FadAltCprime;
    ref.mts_substeps = 1024;
  }
  const Vector x_ref = final_x_at_time(ref, obj, s0, T, dt_min / 16.0);

  OrderStudy study;
  for (double dt : dt_list) {
    const Vector x = final_x_at_time(cfg, obj, s0, T, dt);
    study.errors.emplace_back(dt, (x - x_ref).norm());
  }
  double sum = 0.0;
  int cnt = 0;
  for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
    const auto& [dt_a, e_a] = study.errors[i];
    const auto& [dt_b, e_b] = study.errors[i + 1];
    if (e_a <= 0.0 || e_b <= 0.0 || dt_a == dt_b) continue;
    sum += std::log(e_a / e_b) / std::log(dt_a / dt_b);
    ++cnt;
  }
  if (cnt == 0) throw NumericalError("measure_order: errors too small to fit");
  study.observed_order = sum / cnt;
  return study;
}

std::vector<std::pair<double, double>> ldhd_limit_deviation(
    const Objective& obj, const ExtendedState& s0,
    const std::vector<double>& alpha_list, double mu, double T, double dt) {
  const auto steps = static_cast<std::int64_t>(std::llround(T / dt));

  SchemeConfig ldhd_cfg;
  ldhd_cfg.scheme = Scheme::LdhdBadab;
  ldhd_cfg.dt = dt;
  Trace ref = integrate(s0, obj, ldhd_cfg, StoppingRule::none(), steps, 1);

  std::vector<std::pair<double, double>> out;
  for (double alpha : alpha_list) {
    if (alpha * dt > 0.1)
      throw InputError("ldhd_limit_deviation: alpha*dt must be <= 0.1");
    SchemeConfig fad_cfg;
    fad_cfg.scheme = Scheme::FadDabcbad;
    fad_cfg.dt = dt;
    fad_cfg.params.alpha = alpha;
    fad_cfg.params.mu = mu;
    Trace tr = integrate(s0, obj, fad_cfg, StoppingRule::none(), steps, 1);
    double dev = 0.0;
    const std::size_t m = std::min(tr.records.size(), ref.records.size());
    for (std::size_t i = 0; i < m; ++i)
      dev = std::max(dev, (tr.records[i].x - ref.records[i].x).norm());
    out.emplace_back(alpha, dev);
  }
  return out;
}

double discrete_lyapunov(const ExtendedState& s, const Objective& obj,
                         double mu, double a, double b, double c) {
  const Vector dx =
      obj.has_known_minimum() ? Vector(s.x - obj.min_location()) : s.x;
  return obj.value(s.x) + 0.5 * s.p.squaredNorm() + a * mu * s.xi * s.xi +
         b * dx.squaredNorm() + c * dx.dot(s.p);
}

std::string to_json(const MonotonicityReport& r) {
  nlohmann::json j;
  j["n_violations"] = r.n_violations;
  j["max_violation"] = r.max_violation;
  if (r.first_violation_step)
    j["first_violation_step"] = *r.first_violation_step;
  else
    j["first_violation_step"] = nullptr;
  return j.dump();
}

std::string to_json(const RateFit& r) {
  nlohmann::json j;
  j["kappa"] = r.kappa;
  j["r_squared"] = r.r_squared;
  j["window_start"] = r.window_start;
  j["window_end"] = r.window_end;
  return j.dump();
}

}  // namespace fad
