#pragma once

#include <functional>
#include <optional>

#include "fad/types.hpp"

namespace fad {

enum class CouplingKind {
  Identity,           // A = I (KFAD)
  ForceOuter,         // A = F F^T, unnormalized (FFAD)
  ProjectiveMixture,  // A = lambda1 I + lambda2 * (Pi^F or F F^T)
  Custom,             // dense symmetric matrix supplied by the caller
};

/// The matrix-valued coupling A(x) of the friction-adaptive dynamics.
/// Built-in kinds are never materialized as dense matrices; only
/// matrix-vector products are computed (cost O(d)).
struct Coupling {
  CouplingKind kind = CouplingKind::Identity;
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  // Projector Pi^F = F F^T / |F|^2 when true, raw F F^T when false.
  bool normalized = true;
  std::function<Matrix(const Vector&)> custom_matrix_at;

  static Coupling identity() { return {}; }
  static Coupling force_outer() {
    Coupling c;
    c.kind = CouplingKind::ForceOuter;
    c.lambda1 = 0.0;
    c.lambda2 = 1.0;
    c.normalized = false;
    return c;
  }
  static Coupling mixture(double l1, double l2, bool normalized = true) {
    Coupling c;
    c.kind = CouplingKind::ProjectiveMixture;
    c.lambda1 = l1;
    c.lambda2 = l2;
    c.normalized = normalized;
    return c;
  }
  static Coupling custom(std::function<Matrix(const Vector&)> fn) {
    Coupling c;
    c.kind = CouplingKind::Custom;
    c.custom_matrix_at = std::move(fn);
    return c;
  }

  /// True when A is a scalar multiple of I plus a rank-one term, so matrix
  /// exponentials reduce to the rank-one projector formula.
  bool rank_one_structure() const { return kind != CouplingKind::Custom; }
};

// Norm threshold below which the projector onto the force direction is
// treated as the zero map.
inline constexpr double kDegenerateForceNorm = 1e-14;

/// A(x) v, matrix-free for the built-in kinds. F is the force -grad f at x.
Vector coupling_apply(const Coupling& c, const Vector& x, const Vector& F,
                      const Vector& v);

/// exp(tau A(x)) v via the rank-one projector exponential
/// exp(tau Pi) = I + (e^tau - 1) Pi. Requires rank_one_structure().
Vector coupling_exp_apply(const Coupling& c, double tau, const Vector& F,
                          const Vector& v);

/// Dense A(x) (custom kind, or built-ins materialized for testing).
Matrix coupling_dense(const Coupling& c, const Vector& x, const Vector& F,
                      int dim);

}  // namespace fad
