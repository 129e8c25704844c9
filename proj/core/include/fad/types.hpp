#pragma once

#include <Eigen/Dense>

namespace fad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// State of the extended dynamics: positions, momenta and the adaptive
/// friction scalar xi. The zeta vector is only populated by the ODE-Adam
/// scheme (per-component second-moment estimate); it is empty otherwise.
struct ExtendedState {
  Vector x;
  Vector p;
  double xi = 0.0;
  Vector zeta;

  ExtendedState() = default;
  ExtendedState(Vector x_, Vector p_, double xi_ = 0.0)
      : x(std::move(x_)), p(std::move(p_)), xi(xi_) {}

  bool finite() const {
    return x.allFinite() && p.allFinite() && std::isfinite(xi) &&
           (zeta.size() == 0 || zeta.allFinite());
  }
};

struct DynamicsParams {
  double gamma = 1.0;  // linear friction on p
  double alpha = 1.0;  // friction on xi
  double mu = 1.0;     // coupling mass, strictly positive
};

}  // namespace fad
