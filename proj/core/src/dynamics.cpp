#include "fad/dynamics.hpp"

#include <cmath>

namespace fad {

StateDerivative fad_rhs(const ExtendedState& s, const Objective& obj,
                        const Coupling& c, const DynamicsParams& params) {
  const Vector F = obj.force(s.x);
  const Vector Ap = coupling_apply(c, s.x, F, s.p);
  StateDerivative d;
  d.dx = s.p;
  d.dp = F - s.xi * Ap - params.gamma * s.p;
  d.dxi = s.p.dot(Ap) / params.mu - params.alpha * s.xi;
  return d;
}

double extended_hamiltonian(const ExtendedState& s, const Objective& obj) {
  return 0.5 * s.p.squaredNorm() + obj.value(s.x) + 0.5 * s.xi * s.xi;
}

double lyapunov_G(const ExtendedState& s, const Objective& obj, double mu) {
  const double f_ref = obj.has_reference_energy() ? obj.min_energy() : 0.0;
  return obj.value(s.x) - f_ref + 0.5 * s.p.squaredNorm() +
         0.5 * mu * s.xi * s.xi;
}

double lyapunov_W(const ExtendedState& s, const Objective& obj, double mu,
                  double eps) {
  double w = lyapunov_G(s, obj, mu);
  if (eps != 0.0) {
    const Vector dx = obj.has_known_minimum() ? Vector(s.x - obj.min_location())
                                              : s.x;
    w += eps * dx.dot(s.p) + eps * dx.squaredNorm();
  }
  return w;
}

Vector effective_force(const Vector& x, const Vector& p, const Vector& F,
                       double alpha, double mu) {
  (void)x;
  const double pf = p.dot(F);
  return (1.0 - pf * pf * pf / (alpha * mu)) * F;
}

double rayleigh_dissipation(const Vector& p, const std::optional<Vector>& F,
                            double gamma, double alpha, double mu,
                            RayleighKind kind) {
  const double lin = 0.5 * gamma * p.squaredNorm();
  if (kind == RayleighKind::Kinetic) {
    const double p2 = p.squaredNorm();
    return p2 * p2 / (4.0 * alpha * mu) + lin;
  }
  if (!F) throw InputError("rayleigh_dissipation: force kind requires F");
  const double pf = p.dot(*F);
  return pf * pf * pf * pf / (4.0 * alpha * mu) + lin;
}

}  // namespace fad
