#pragma once

#include <optional>

#include "fad/coupling.hpp"
#include "fad/objective.hpp"
#include "fad/types.hpp"

namespace fad {

/// Time derivative of (x, p, xi) under the friction-adaptive dynamics
///   dx = p, dp = F(x) - xi A(x) p - gamma p,
///   dxi = p^T A(x) p / mu - alpha xi.
struct StateDerivative {
  Vector dx;
  Vector dp;
  double dxi;
};

StateDerivative fad_rhs(const ExtendedState& s, const Objective& obj,
                        const Coupling& c, const DynamicsParams& params);

/// H~(x,p,xi) = |p|^2/2 + f(x) + xi^2/2.
double extended_hamiltonian(const ExtendedState& s, const Objective& obj);

/// G(x,p,xi) = f(x) - f(x*) + |p|^2/2 + (mu/2) xi^2. When the objective has
/// no known minimum, f-reference 0 is used (reported as "uncentered" by the
/// output layer).
double lyapunov_G(const ExtendedState& s, const Objective& obj, double mu);

/// W_eps = G + eps (x - x*) . p + eps |x - x*|^2, eps in [0, 1/2].
double lyapunov_W(const ExtendedState& s, const Objective& obj, double mu,
                  double eps);

/// F_eff = (1 - (p.F)^3 / (alpha mu)) F, the effective force of the
/// force-based variant's oscillation-suppression mechanism.
Vector effective_force(const Vector& x, const Vector& p, const Vector& F,
                       double alpha, double mu);

enum class RayleighKind { Kinetic, Force };

/// Generalized quartic Rayleigh dissipation function:
///   kinetic: |p|^4/(4 alpha mu) + gamma |p|^2/2
///   force:   (p.F)^4/(4 alpha mu) + gamma |p|^2/2
double rayleigh_dissipation(const Vector& p, const std::optional<Vector>& F,
                            double gamma, double alpha, double mu,
                            RayleighKind kind);

}  // namespace fad
