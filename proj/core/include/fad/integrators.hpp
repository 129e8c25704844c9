#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fad/coupling.hpp"
#include "fad/dynamics.hpp"
#include "fad/objective.hpp"
#include "fad/rng.hpp"
#include "fad/types.hpp"

namespace fad {

enum class Scheme {
  LdhdBadab,     // B(h/2) A(h/2) D(h) A(h/2) B(h/2)
  FadDabcbad,    // D(h/2) A(h/2) B(h/2) C(h) B(h/2) A(h/2) D(h/2)
  FadAltCprime,  // D'(h/2) A(h/2) B(h/2) C'(h) B(h/2) A(h/2) D'(h/2)
  FadCdba,       // analysis scheme C'D'BA
  AdamOde,       // first-order Lie composition C D B A
  Baoab,         // Langevin initializer
};

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct SchemeConfig {
  Scheme scheme = Scheme::LdhdBadab;
  double dt = 0.01;
  DynamicsParams params;
  Coupling coupling;
  int mts_substeps = 16;      // C' inner steps
  double adam_eps = 1e-8;
  double beta_inv = 0.0;      // BAOAB temperature
  std::uint64_t seed = 0;     // BAOAB only
};

struct TraceRecord {
  std::int64_t step = 0;
  double time = 0.0;
  Vector x;
  Vector p;
  double xi = 0.0;
  double f = 0.0;
  double grad_norm = 0.0;
  double h_tilde = 0.0;
  double g = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;
  int stride = 1;
  std::int64_t iterations = 0;

  enum class Status { Converged, MaxSteps, Diverged } status = Status::MaxSteps;
  std::int64_t diverged_step = -1;
};

/// Default recording stride: 1 for small systems, 10 otherwise.
int default_stride(int dim);

// Elementary sub-flows. Each solves one part of the splitting exactly.
void step_A(ExtendedState& s, double dt);                       // drift
void step_B(ExtendedState& s, const Vector& F, double dt);      // kick
void step_D(ExtendedState& s, double gamma, double dt,
            bool also_xi = false, double alpha = 0.0);          // friction

/// Leapfrog C step for identity / force-outer / mixture couplings; x (and
/// hence F, A) is frozen for the duration. alpha = 0 uses the analytic
/// limit of (1 - e^{-alpha dt})/alpha -> dt.
void step_C_leapfrog(ExtendedState& s, const Coupling& c, const Vector& F,
                     double dt, double alpha, double mu);

/// Linearly implicit C step for a general dense symmetric PSD matrix A.
void step_C_implicit(ExtendedState& s, const Matrix& A, double dt,
                     double alpha, double mu);

/// C' step (no -alpha xi term): integrates the closed 2-d system
/// (omega, xi), omega = p^T A p, by n_sub symmetric substeps, then applies
/// p <- exp(eta A) p with eta = -integral of xi. Requires A = I or a
/// projector.
void step_Cprime_mts(ExtendedState& s, const Coupling& c, const Vector& F,
                     double dt, double mu, int n_sub);

/// One-step integrators. Each owns a force cache so that palindromic
/// compositions evaluate a single fresh gradient per step in steady state.
class Integrator {
 public:
  Integrator(const Objective& obj, SchemeConfig cfg);

  void step(ExtendedState& s);
  const SchemeConfig& config() const { return cfg_; }

  /// Clears the force cache (call after externally modifying the state).
  void reset();

 private:
  void ldhd_step(ExtendedState& s);
  void fad_step(ExtendedState& s);
  void fad_alt_step(ExtendedState& s);
  void cdba_step(ExtendedState& s);
  void adam_step(ExtendedState& s);
  void baoab_step(ExtendedState& s);

  const Vector& force_at(const Vector& x);

  const Objective* obj_;
  SchemeConfig cfg_;
  Rng rng_;
  std::optional<Vector> cached_force_;
  Vector cached_x_;
};

// Free-standing single-step entry points (fresh integrator each call).
void ldhd_step(ExtendedState& s, const Objective& obj, const SchemeConfig& cfg);
void fad_step(ExtendedState& s, const Objective& obj, const SchemeConfig& cfg);
void fad_alt_step(ExtendedState& s, const Objective& obj,
                  const SchemeConfig& cfg);
void cdba_step(ExtendedState& s, const Objective& obj, const SchemeConfig& cfg);
void adam_step(ExtendedState& s, const Objective& obj, const SchemeConfig& cfg);
void baoab_step(ExtendedState& s, const Objective& obj, double gamma,
                double beta_inv, double dt, Rng& rng);

struct StoppingRule {
  enum class Kind { None, DistanceToMinimum } kind = Kind::None;
  double tol = 1e-4;

  static StoppingRule none() { return {}; }
  static StoppingRule distance(double tol) {
    return {Kind::DistanceToMinimum, tol};
  }
};

/// Runs up to max_steps or until the stopping rule fires. Records at the
/// given stride (default by dimension) plus the final state.
Trace integrate(const ExtendedState& s0, const Objective& obj,
                const SchemeConfig& cfg, const StoppingRule& stop,
                std::int64_t max_steps, int stride = 0);

}  // namespace fad
