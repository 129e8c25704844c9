#include "fad/integrators.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace fad {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::LdhdBadab: return "ldhd-badab";
    case Scheme::FadDabcbad: return "fad-dabcbad";
    case Scheme::FadAltCprime: return "fad-alt-cprime";
    case Scheme::FadCdba: return "fad-cdba";
    case Scheme::AdamOde: return "adam-ode";
    case Scheme::Baoab: return "baoab";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  for (Scheme s : {Scheme::LdhdBadab, Scheme::FadDabcbad, Scheme::FadAltCprime,
                   Scheme::FadCdba, Scheme::AdamOde, Scheme::Baoab})
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

int default_stride(int dim) { return dim <= 10 ? 1 : 10; }

void step_A(ExtendedState& s, double dt) { s.x += dt * s.p; }

void step_B(ExtendedState& s, const Vector& F, double dt) { s.p += dt * F; }

void step_D(ExtendedState& s, double gamma, double dt, bool also_xi,
            double alpha) {
  s.p *= std::exp(-gamma * dt);
  if (also_xi) s.xi *= std::exp(-alpha * dt);
}

namespace {

// (1 - e^{-alpha dt}) / alpha with the analytic alpha -> 0 limit.
double expm1_factor(double alpha, double dt) {
  if (alpha == 0.0) return dt;
  return -std::expm1(-alpha * dt) / alpha;
}

}  // namespace

void step_C_leapfrog(ExtendedState& s, const Coupling& c, const Vector& F,
                     double dt, double alpha, double mu) {
  if (!c.rank_one_structure())
    throw InputError("step_C_leapfrog: custom couplings need step_C_implicit");
  s.p = coupling_exp_apply(c, -0.5 * dt * s.xi, F, s.p);
  const double pAp = s.p.dot(coupling_apply(c, Vector(), F, s.p));
  s.xi = std::exp(-alpha * dt) * s.xi + expm1_factor(alpha, dt) * pAp / mu;
  s.p = coupling_exp_apply(c, -0.5 * dt * s.xi, F, s.p);
}

void step_C_implicit(ExtendedState& s, const Matrix& A, double dt,
                     double alpha, double mu) {
  const auto d = A.rows();
  Matrix M = Matrix::Identity(d, d) + (0.5 * dt * s.xi) * A;
  Eigen::PartialPivLU<Matrix> lu(M);
  const Vector p_half = lu.solve(s.p);
  if (!p_half.allFinite()) {
    throw NumericalError(
        "step_C_implicit: linear solve failed (matrix condition estimate " +
        std::to_string(M.norm() * lu.inverse().norm()) + ")");
  }
  const double pAp = p_half.dot(A * p_half);
  s.xi = std::exp(-alpha * dt) * s.xi + expm1_factor(alpha, dt) * pAp / mu;
  s.p = p_half - (0.5 * dt * s.xi) * (A * p_half);
}

void step_Cprime_mts(ExtendedState& s, const Coupling& c, const Vector& F,
                     double dt, double mu, int n_sub) {
  const bool is_identity = c.kind == CouplingKind::Identity ||
                           (c.kind == CouplingKind::ProjectiveMixture &&
                            c.lambda2 == 0.0 && c.lambda1 == 1.0);
  const bool is_projector = c.kind == CouplingKind::ProjectiveMixture &&
                            c.normalized && c.lambda1 == 0.0 &&
                            c.lambda2 == 1.0;
  if (!is_identity && !is_projector)
    throw InputError(
        "step_Cprime_mts: coupling must be the identity or a normalized "
        "projector; use step_C_implicit for general couplings");

  double omega = s.p.dot(coupling_apply(c, Vector(), F, s.p));
  double xi = s.xi;
  double eta = 0.0;  // -integral of xi over the step
  const double h = dt / n_sub;
  for (int k = 0; k < n_sub; ++k) {
    xi += 0.5 * h * omega / mu;
    eta -= h * xi;
    omega *= std::exp(-2.0 * xi * h);
    xi += 0.5 * h * omega / mu;
  }
  s.xi = xi;
  s.p = coupling_exp_apply(c, eta, F, s.p);
}

Integrator::Integrator(const Objective& obj, SchemeConfig cfg)
    : obj_(&obj), cfg_(std::move(cfg)), rng_(cfg_.seed) {
  if (cfg_.dt <= 0.0) throw InputError("SchemeConfig: dt must be positive");
  if (cfg_.params.mu <= 0.0)
    throw InputError("SchemeConfig: mu must be strictly positive");
  if (cfg_.mts_substeps < 1)
    throw InputError("SchemeConfig: mts-substeps must be >= 1");
}

void Integrator::reset() { cached_force_.reset(); }

const Vector& Integrator::force_at(const Vector& x) {
  if (!cached_force_ || cached_x_.size() != x.size() || cached_x_ != x) {
    cached_force_ = obj_->force(x);
    cached_x_ = x;
  }
  return *cached_force_;
}

void Integrator::step(ExtendedState& s) {
  switch (cfg_.scheme) {
    case Scheme::LdhdBadab: return ldhd_step(s);
    case Scheme::FadDabcbad: return fad_step(s);
    case Scheme::FadAltCprime: return fad_alt_step(s);
    case Scheme::FadCdba: return cdba_step(s);
    case Scheme::AdamOde: return adam_step(s);
    case Scheme::Baoab: return baoab_step(s);
  }
}

// B(h/2) A(h/2) D(h) A(h/2) B(h/2); the trailing and next step's leading
// half-kicks share one force evaluation through the cache.
void Integrator::ldhd_step(ExtendedState& s) {
  const double h = cfg_.dt;
  step_B(s, force_at(s.x), 0.5 * h);
  step_A(s, 0.5 * h);
  step_D(s, cfg_.params.gamma, h);
  step_A(s, 0.5 * h);
  step_B(s, force_at(s.x), 0.5 * h);
}

// D(h/2) A(h/2) B(h/2) C(h) B(h/2) A(h/2) D(h/2); the middle B-C-B block
// shares one fresh gradient since x does not move inside it.
void Integrator::fad_step(ExtendedState& s) {
  const double h = cfg_.dt;
  const auto& pr = cfg_.params;
  step_D(s, pr.gamma, 0.5 * h);
  step_A(s, 0.5 * h);
  const Vector F = obj_->force(s.x);
  step_B(s, F, 0.5 * h);
  if (cfg_.coupling.rank_one_structure()) {
    step_C_leapfrog(s, cfg_.coupling, F, h, pr.alpha, pr.mu);
  } else {
    step_C_implicit(s, cfg_.coupling.custom_matrix_at(s.x), h, pr.alpha,
                    pr.mu);
  }
  step_B(s, F, 0.5 * h);
  step_A(s, 0.5 * h);
  step_D(s, pr.gamma, 0.5 * h);
}

// D'(h/2) A(h/2) B(h/2) C'(h) B(h/2) A(h/2) D'(h/2).
void Integrator::fad_alt_step(ExtendedState& s) {
  const double h = cfg_.dt;
  const auto& pr = cfg_.params;
  step_D(s, pr.gamma, 0.5 * h, true, pr.alpha);
  step_A(s, 0.5 * h);
  const Vector F = obj_->force(s.x);
  step_B(s, F, 0.5 * h);
  step_Cprime_mts(s, cfg_.coupling, F, h, pr.mu, cfg_.mts_substeps);
  step_B(s, F, 0.5 * h);
  step_A(s, 0.5 * h);
  step_D(s, pr.gamma, 0.5 * h, true, pr.alpha);
}

// Analysis scheme: exact C' p-decay, xi adjusted to preserve the quadratic
// invariant |p|^2 + mu xi^2, then D', B, A with full steps.
void Integrator::cdba_step(ExtendedState& s) {
  const double h = cfg_.dt;
  const auto& pr = cfg_.params;
  const Coupling& c = cfg_.coupling;
  const Vector grad = obj_->gradient(s.x);
  const Vector F = -grad;

  Vector p_half, p_decayed2;
  if (c.rank_one_structure()) {
    p_half = coupling_exp_apply(c, -s.xi * h, F, s.p);
    p_decayed2 = coupling_exp_apply(c, -2.0 * s.xi * h, F, s.p);
  } else {
    const Matrix A = c.custom_matrix_at(s.x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const Vector lam = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const Vector pv = V.transpose() * s.p;
    p_half = V * (pv.array() * (-s.xi * h * lam.array()).exp()).matrix();
    p_decayed2 = V * (pv.array() * (-2.0 * s.xi * h * lam.array()).exp()).matrix();
  }
  // Well-defined at xi = 0: the exponent vanishes and xi~ = xi.
  const double xi_tilde =
      std::sqrt(s.xi * s.xi + s.p.dot(s.p - p_decayed2) / pr.mu);
  p_half *= std::exp(-pr.gamma * h);
  s.xi = std::exp(-pr.alpha * h) * xi_tilde;
  s.p = p_half - h * grad;
  s.x += h * s.p;
}

// First-order Lie composition C D B A, full steps each; C and B share the
// gradient at the current x.
void Integrator::adam_step(ExtendedState& s) {
  const double h = cfg_.dt;
  const auto& pr = cfg_.params;
  if (s.zeta.size() != s.x.size()) s.zeta = Vector::Zero(s.x.size());
  const Vector grad = obj_->gradient(s.x);
  const Vector F = -grad;
  // C: zeta' = e^{-alpha h} zeta + (F^2/alpha)(1 - e^{-alpha h})
  s.zeta = std::exp(-pr.alpha * h) * s.zeta +
           expm1_factor(pr.alpha, h) * grad.array().square().matrix();
  // D
  s.p *= std::exp(-pr.gamma * h);
  // B
  s.p += h * F;
  // A: x += h p / (sqrt(zeta) + eps), componentwise
  s.x.array() += h * s.p.array() / (s.zeta.array().sqrt() + cfg_.adam_eps);
}

// B(h/2) A(h/2) O(h) A(h/2) B(h/2) with an exact OU mid-step.
void Integrator::baoab_step(ExtendedState& s) {
  const double h = cfg_.dt;
  const double gamma = cfg_.params.gamma;
  step_B(s, force_at(s.x), 0.5 * h);
  step_A(s, 0.5 * h);
  const double damp = std::exp(-gamma * h);
  const double noise = std::sqrt(-std::expm1(-2.0 * gamma * h) * cfg_.beta_inv);
  for (int i = 0; i < s.p.size(); ++i)
    s.p[i] = damp * s.p[i] + noise * rng_.normal();
  step_A(s, 0.5 * h);
  step_B(s, force_at(s.x), 0.5 * h);
}

void ldhd_step(ExtendedState& s, const Objective& obj,
               const SchemeConfig& cfg) {
  Integrator(obj, cfg).step(s);
}
void fad_step(ExtendedState& s, const Objective& obj, const SchemeConfig& cfg) {
  Integrator(obj, cfg).step(s);
}
void fad_alt_step(ExtendedState& s, const Objective& obj,
                  const SchemeConfig& cfg) {
  Integrator(obj, cfg).step(s);
}
void cdba_step(ExtendedState& s, const Objective& obj,
               const SchemeConfig& cfg) {
  Integrator(obj, cfg).step(s);
}
void adam_step(ExtendedState& s, const Objective& obj,
               const SchemeConfig& cfg) {
  Integrator(obj, cfg).step(s);
}
void baoab_step(ExtendedState& s, const Objective& obj, double gamma,
                double beta_inv, double dt, Rng& rng) {
  const double h = dt;
  Vector F = obj.force(s.x);
  step_B(s, F, 0.5 * h);
  step_A(s, 0.5 * h);
  const double damp = std::exp(-gamma * h);
  const double noise = std::sqrt(-std::expm1(-2.0 * gamma * h) * beta_inv);
  for (int i = 0; i < s.p.size(); ++i)
    s.p[i] = damp * s.p[i] + noise * rng.normal();
  step_A(s, 0.5 * h);
  F = obj.force(s.x);
  step_B(s, F, 0.5 * h);
}

namespace {

TraceRecord make_record(std::int64_t step, double dt, const ExtendedState& s,
                        const Objective& obj, double mu) {
  TraceRecord r;
  r.step = step;
  r.time = static_cast<double>(step) * dt;
  r.x = s.x;
  r.p = s.p;
  r.xi = s.xi;
  r.f = obj.value(s.x);
  r.grad_norm = obj.gradient(s.x).norm();
  r.h_tilde = 0.5 * s.p.squaredNorm() + r.f + 0.5 * s.xi * s.xi;
  const double f_ref = obj.has_reference_energy() ? obj.min_energy() : 0.0;
  r.g = r.f - f_ref + 0.5 * s.p.squaredNorm() + 0.5 * mu * s.xi * s.xi;
  return r;
}

}  // namespace

Trace integrate(const ExtendedState& s0, const Objective& obj,
                const SchemeConfig& cfg, const StoppingRule& stop,
                std::int64_t max_steps, int stride) {
  if (s0.x.size() != obj.dim() || s0.p.size() != obj.dim())
    throw InputError("integrate: state/objective dimension mismatch");
  if (stop.kind == StoppingRule::Kind::DistanceToMinimum &&
      !obj.has_known_minimum())
    throw InputError("integrate: distance rule needs a known minimum");

  Trace trace;
  trace.stride = stride == 0 ? default_stride(obj.dim()) : stride;
  const bool record_final_only = stride < 0;

  Integrator integ(obj, cfg);
  ExtendedState s = s0;
  const double mu = cfg.params.mu;

  auto stopped = [&](const ExtendedState& st) {
    return stop.kind == StoppingRule::Kind::DistanceToMinimum &&
           (st.x - obj.min_location()).norm() <= stop.tol;
  };

  std::int64_t n = 0;
  trace.status = Trace::Status::MaxSteps;
  if (!record_final_only)
    trace.records.push_back(make_record(0, cfg.dt, s, obj, mu));
  if (stopped(s)) {
    trace.status = Trace::Status::Converged;
  } else {
    for (n = 1; n <= max_steps; ++n) {
      integ.step(s);
      if (!s.finite()) {
        trace.status = Trace::Status::Diverged;
        trace.diverged_step = n;
        break;
      }
      const bool done = stopped(s);
      if (!record_final_only && (n % trace.stride == 0 || done))
        trace.records.push_back(make_record(n, cfg.dt, s, obj, mu));
      if (done) {
        trace.status = Trace::Status::Converged;
        break;
      }
    }
    if (n > max_steps) n = max_steps;
  }
  trace.iterations = n;
  if (trace.status != Trace::Status::Diverged &&
      (trace.records.empty() || trace.records.back().step != trace.iterations))
    trace.records.push_back(make_record(trace.iterations, cfg.dt, s, obj, mu));
  if (trace.status == Trace::Status::Diverged && trace.records.empty())
    trace.records.push_back(make_record(0, cfg.dt, s0, obj, mu));
  return trace;
}

}  // namespace fad
