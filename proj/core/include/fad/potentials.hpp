#pragma once

#include <string>
#include <utility>

#include "fad/objective.hpp"
#include "fad/types.hpp"

namespace fad {

/// Quadratic form f(x) = x^T C x / 2 with gradient C x.
std::pair<double, Vector> harmonic(const Vector& x, const Matrix& C);

/// Rosenbrock f(x) = (a - x1)^2 + b (x2 - x1^2)^2 for 2-d x.
std::pair<double, Vector> rosenbrock(const Vector& x, double a = 1.0,
                                     double b = 100.0);

/// Lennard-Jones cluster energy/gradient for a 3N position vector,
/// phi(r) = 4 (r^-12 - r^-6), pairwise sum over i<j. Throws
/// SingularityError for coincident atoms (r < 1e-12).
std::pair<double, Vector> lj_cluster(const Vector& q);

/// Morse cluster, phi(r) = (1 - exp(-a (r - r0)))^2 - 1 (depth -1 at r0,
/// zero at infinity).
std::pair<double, Vector> morse_cluster(const Vector& q, double a = 3.0,
                                        double r0 = 1.0);

enum class PairKind { LennardJones, Morse };

struct ClusterSpec {
  int n_atoms = 0;
  PairKind pair_kind = PairKind::LennardJones;
  double morse_a = 3.0;
  double morse_r0 = 1.0;
  std::optional<double> reference_min_energy;
};

/// Objective factories.
Objective make_harmonic(const Matrix& C);
Objective make_rosenbrock(double a = 1.0, double b = 100.0);
Objective make_cluster(const ClusterSpec& spec);

/// Central-difference gradient check: max over components of the relative
/// error with denominator max(1, |component|).
double fd_gradient_check(const Objective& obj, const Vector& x, double h);

}  // namespace fad
