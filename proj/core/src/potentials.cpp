#include "fad/potentials.hpp"

#include <cmath>

namespace fad {

std::pair<double, Vector> harmonic(const Vector& x, const Matrix& C) {
  if (x.size() != C.rows() || C.rows() != C.cols())
    throw InputError("harmonic: dimension mismatch between x and C");
  Vector g = C * x;
  return {0.5 * x.dot(g), std::move(g)};
}

std::pair<double, Vector> rosenbrock(const Vector& x, double a, double b) {
  if (x.size() != 2) throw InputError("rosenbrock: expected a 2-vector");
  const double x1 = x[0], x2 = x[1];
  const double t = x2 - x1 * x1;
  double f = (a - x1) * (a - x1) + b * t * t;
  Vector g(2);
  g[0] = -2.0 * (a - x1) - 4.0 * b * t * x1;
  g[1] = 2.0 * b * t;
  return {f, std::move(g)};
}

namespace {

constexpr double kCoincidentR = 1e-12;

// Pairwise sum with pair_force(r2, r) returning dphi/dr / r; single O(N^2)
// double loop, no cutoffs.
template <typename Phi>
std::pair<double, Vector> pair_sum(const Vector& q, Phi&& phi,
                                   const char* what) {
  if (q.size() % 3 != 0 || q.size() < 6)
    throw InputError(std::string(what) + ": positions must be a 3N vector, N >= 2");
  const int n = static_cast<int>(q.size() / 3);
  double energy = 0.0;
  Vector grad = Vector::Zero(q.size());
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = q[3 * i] - q[3 * j];
      const double dy = q[3 * i + 1] - q[3 * j + 1];
      const double dz = q[3 * i + 2] - q[3 * j + 2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      const double r = std::sqrt(r2);
      if (r < kCoincidentR)
        throw SingularityError(std::string(what) + ": coincident atoms " +
                               std::to_string(i) + ", " + std::to_string(j));
      auto [e, dphi_over_r] = phi(r);
      energy += e;
      grad[3 * i] += dphi_over_r * dx;
      grad[3 * i + 1] += dphi_over_r * dy;
      grad[3 * i + 2] += dphi_over_r * dz;
      grad[3 * j] -= dphi_over_r * dx;
      grad[3 * j + 1] -= dphi_over_r * dy;
      grad[3 * j + 2] -= dphi_over_r * dz;
    }
  }
  return {energy, std::move(grad)};
}

}  // namespace

std::pair<double, Vector> lj_cluster(const Vector& q) {
  return pair_sum(
      q,
      [](double r) {
        const double inv2 = 1.0 / (r * r);
        const double inv6 = inv2 * inv2 * inv2;
        const double e = 4.0 * (inv6 * inv6 - inv6);
        // dphi/dr / r = 4 (-12 r^-13 + 6 r^-7) / r
        const double d = 4.0 * (-12.0 * inv6 * inv6 + 6.0 * inv6) * inv2;
        return std::pair<double, double>{e, d};
      },
      "lj_cluster");
}

std::pair<double, Vector> morse_cluster(const Vector& q, double a, double r0) {
  return pair_sum(
      q,
      [a, r0](double r) {
        const double ex = std::exp(-a * (r - r0));
        const double one_m = 1.0 - ex;
        // Pair energy is shifted by -1 so the well depth is -1 at r0 and the
        // potential vanishes at infinity (the usual cluster convention).
        const double e = one_m * one_m - 1.0;
        // dphi/dr = 2 (1 - e) * a * e
        const double d = 2.0 * a * one_m * ex / r;
        return std::pair<double, double>{e, d};
      },
      "morse_cluster");
}

Objective make_harmonic(const Matrix& C) {
  const int d = static_cast<int>(C.rows());
  Objective obj(
      d, "harmonic",
      [C](const Vector& x) { return harmonic(x, C).first; },
      [C](const Vector& x) { return harmonic(x, C).second; });
  obj.set_known_minimum(Vector::Zero(d), 0.0);
  return obj;
}

Objective make_rosenbrock(double a, double b) {
  Objective obj(
      2, "rosenbrock",
      [a, b](const Vector& x) { return rosenbrock(x, a, b).first; },
      [a, b](const Vector& x) { return rosenbrock(x, a, b).second; });
  Vector xmin(2);
  xmin << a, a * a;
  obj.set_known_minimum(xmin, 0.0);
  return obj;
}

Objective make_cluster(const ClusterSpec& spec) {
  const int d = 3 * spec.n_atoms;
  if (spec.n_atoms < 2) throw InputError("make_cluster: need at least 2 atoms");
  if (spec.pair_kind == PairKind::LennardJones) {
    return Objective(
        d, "lj" + std::to_string(spec.n_atoms),
        [](const Vector& q) { return lj_cluster(q).first; },
        [](const Vector& q) { return lj_cluster(q).second; });
  }
  const double a = spec.morse_a, r0 = spec.morse_r0;
  return Objective(
      d, "morse" + std::to_string(spec.n_atoms),
      [a, r0](const Vector& q) { return morse_cluster(q, a, r0).first; },
      [a, r0](const Vector& q) { return morse_cluster(q, a, r0).second; });
}

double fd_gradient_check(const Objective& obj, const Vector& x, double h) {
  if (h <= 0.0) throw InputError("fd_gradient_check: h must be positive");
  const Vector g = obj.gradient(x);
  Vector xp = x;
  double max_err = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = obj.value(xp);
    xp[i] = x[i] - h;
    const double fm = obj.value(xp);
    xp[i] = x[i];
    const double fd = (fp - fm) / (2.0 * h);
    const double denom = std::max(1.0, std::abs(g[i]));
    max_err = std::max(max_err, std::abs(fd - g[i]) / denom);
  }
  return max_err;
}

}  // namespace fad
