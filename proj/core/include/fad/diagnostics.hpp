#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fad/integrators.hpp"

namespace fad {

enum class Functional { HTilde, G, WEps };

struct MonotonicityReport {
  int n_violations = 0;
  double max_violation = 0.0;  // largest positive increment
  std::optional<std::int64_t> first_violation_step;
};

/// Counts increments of the chosen functional exceeding tol between
/// consecutive trace records. The trace should be recorded with stride 1.
MonotonicityReport check_monotone(const Trace& trace, const Objective& obj,
                                  Functional functional, double tol,
                                  double mu = 1.0, double eps = 0.0);

/// |p| <= tol, |grad f| <= tol, |xi| <= tol.
bool is_equilibrium(const ExtendedState& s, const Objective& obj, double tol);

struct RateFit {
  double kappa = 0.0;
  double r_squared = 0.0;
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
};

/// Least-squares line on (time, log value); kappa = -slope. Functional
/// values must be positive on the window. Window given as record indices;
/// defaults to the last 50% of the trace.
RateFit fit_rate(const Trace& trace, const Objective& obj,
                 Functional functional,
                 std::optional<std::pair<std::int64_t, std::int64_t>> window =
                     std::nullopt,
                 double mu = 1.0, double eps = 0.0);

struct OrderStudy {
  std::vector<std::pair<double, double>> errors;  // (dt, global error)
  double observed_order = 0.0;
};

/// Global error at time T against a fine reference (the alternative C'D'
/// splitting at dt_min/16 with 1024 substeps where applicable, otherwise the
/// scheme itself at dt_min/16); observed order is the mean log2 error ratio.
OrderStudy measure_order(const SchemeConfig& cfg, const Objective& obj,
                         const ExtendedState& s0, double T,
                         const std::vector<double>& dt_list);

/// Sup over recorded times of |x_FAD - x_LDHD| for each alpha; dt should be
/// small and alpha*dt <= 0.1 is enforced.
std::vector<std::pair<double, double>> ldhd_limit_deviation(
    const Objective& obj, const ExtendedState& s0,
    const std::vector<double>& alpha_list, double mu, double T, double dt);

/// Discrete Lyapunov W(x,p,xi) = f(x) + |p|^2/2 + a mu xi^2 + b |x-x*|^2
/// + c (x-x*).p used as a dissipation diagnostic for the analysis scheme.
double discrete_lyapunov(const ExtendedState& s, const Objective& obj,
                         double mu, double a, double b, double c);

std::string to_json(const MonotonicityReport& r);
std::string to_json(const RateFit& r);

}  // namespace fad
