#include "fad/coupling.hpp"

#include <cmath>

#include "fad/objective.hpp"

namespace fad {

Vector coupling_apply(const Coupling& c, const Vector& x, const Vector& F,
                      const Vector& v) {
  switch (c.kind) {
    case CouplingKind::Identity:
      return v;
    case CouplingKind::ForceOuter:
      return F.dot(v) * F;
    case CouplingKind::ProjectiveMixture: {
      Vector out = c.lambda1 * v;
      if (c.normalized) {
        const double f2 = F.squaredNorm();
        // Projector onto a vanishing force is the zero map.
        if (f2 >= kDegenerateForceNorm * kDegenerateForceNorm)
          out += c.lambda2 * (F.dot(v) / f2) * F;
      } else {
        out += c.lambda2 * F.dot(v) * F;
      }
      return out;
    }
    case CouplingKind::Custom:
      return c.custom_matrix_at(x) * v;
  }
  throw InputError("coupling_apply: unknown kind");
}

Vector coupling_exp_apply(const Coupling& c, double tau, const Vector& F,
                          const Vector& v) {
  switch (c.kind) {
    case CouplingKind::Identity:
      return std::exp(tau) * v;
    case CouplingKind::ForceOuter: {
      // A = F F^T = |F|^2 Pi; exp(tau A) = I + (e^{tau |F|^2} - 1) Pi
      const double f2 = F.squaredNorm();
      if (f2 < kDegenerateForceNorm * kDegenerateForceNorm) return v;
      return v + std::expm1(tau * f2) * (F.dot(v) / f2) * F;
    }
    case CouplingKind::ProjectiveMixture: {
      const double f2 = F.squaredNorm();
      Vector out = std::exp(tau * c.lambda1) * v;
      if (f2 < kDegenerateForceNorm * kDegenerateForceNorm) return out;
      const double s = c.normalized ? 1.0 : f2;
      out += std::exp(tau * c.lambda1) * std::expm1(tau * c.lambda2 * s) *
             (F.dot(v) / f2) * F;
      return out;
    }
    case CouplingKind::Custom:
      break;
  }
  throw InputError(
      "coupling_exp_apply: custom couplings have no rank-one exponential; use "
      "a dense solver");
}

Matrix coupling_dense(const Coupling& c, const Vector& x, const Vector& F,
                      int dim) {
  if (c.kind == CouplingKind::Custom) return c.custom_matrix_at(x);
  Matrix A = Matrix::Zero(dim, dim);
  Vector e = Vector::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    e[i] = 1.0;
    A.col(i) = coupling_apply(c, x, F, e);
    e[i] = 0.0;
  }
  return A;
}

}  // namespace fad
