#include <cmath>
#include <random>

#include "doctest.h"
#include "fad/dynamics.hpp"
#include "fad/potentials.hpp"

using namespace fad;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Objective harm110() {
  Matrix C = Matrix::Zero(2, 2);
  C(0, 0) = 1.0;
  C(1, 1) = 10.0;
  return make_harmonic(C);
}

}  // namespace

TEST_CASE("fad_rhs worked values") {
  const Objective obj = harm110();
  DynamicsParams params;
  params.gamma = 1.0;

  // At rest: dx = 0, dp = F, dxi = 0.
  ExtendedState s(vec2(1, 2), vec2(0, 0));
  const StateDerivative d = fad_rhs(s, obj, Coupling::identity(), params);
  CHECK(d.dx.norm() == 0.0);
  CHECK(d.dp(0) == doctest::Approx(-1.0));
  CHECK(d.dp(1) == doctest::Approx(-20.0));
  CHECK(d.dxi == 0.0);

  // At a critical point with p = 0, xi = 0 everything vanishes.
  ExtendedState eq(vec2(0, 0), vec2(0, 0));
  const StateDerivative deq = fad_rhs(eq, obj, Coupling::identity(), params);
  CHECK(deq.dx.norm() == 0.0);
  CHECK(deq.dp.norm() == 0.0);
  CHECK(deq.dxi == 0.0);

  // gamma = 0, xi = 0: plain Hamiltonian right-hand side.
  params.gamma = 0.0;
  ExtendedState h(vec2(1, 2), vec2(0.5, -0.5));
  const StateDerivative dh = fad_rhs(h, obj, Coupling::identity(), params);
  CHECK((dh.dp - obj.force(h.x)).norm() <= 1e-15);
  CHECK((dh.dx - h.p).norm() == 0.0);
}

TEST_CASE("equilibrium characterization") {
  DynamicsParams params;
  std::mt19937 gen(17);
  std::normal_distribution<double> n;
  for (const Objective& obj : {harm110(), make_rosenbrock()}) {
    ExtendedState eq(obj.min_location(), Vector::Zero(2));
    const StateDerivative d = fad_rhs(eq, obj, Coupling::identity(), params);
    CHECK(d.dx.norm() <= 1e-12);
    CHECK(d.dp.norm() <= 1e-12);
    CHECK(std::abs(d.dxi) <= 1e-12);

    // Random non-equilibrium states have a nonzero derivative.
    for (int k = 0; k < 10; ++k) {
      ExtendedState s(vec2(n(gen), n(gen)), vec2(n(gen), n(gen)),
                      std::abs(n(gen)));
      const StateDerivative ds = fad_rhs(s, obj, Coupling::identity(), params);
      const double mag =
          ds.dx.norm() + ds.dp.norm() + std::abs(ds.dxi);
      CHECK(mag > 1e-8);
    }
  }
}

TEST_CASE("extended hamiltonian") {
  const Objective obj = harm110();
  ExtendedState s(vec2(0, 0), vec2(1, 0), 2.0);
  CHECK(extended_hamiltonian(s, obj) == doctest::Approx(2.5));

  ExtendedState eq(vec2(0, 0), vec2(0, 0));
  CHECK(extended_hamiltonian(eq, obj) == 0.0);
}

TEST_CASE("orbital derivative of H-tilde") {
  // With mu = 1 and alpha = 0 the xi terms cancel exactly and
  // d/dt H~ = -gamma |p|^2.
  const Objective obj = harm110();
  DynamicsParams params;
  params.gamma = 0.7;
  params.alpha = 0.0;
  params.mu = 1.0;
  std::mt19937 gen(23);
  std::normal_distribution<double> n;
  for (int k = 0; k < 20; ++k) {
    ExtendedState s(vec2(n(gen), n(gen)), vec2(n(gen), n(gen)),
                    std::abs(n(gen)));
    const StateDerivative d = fad_rhs(s, obj, Coupling::identity(), params);
    const double dH = obj.gradient(s.x).dot(d.dx) + s.p.dot(d.dp) +
                      s.xi * d.dxi;
    CHECK(dH == doctest::Approx(-params.gamma * s.p.squaredNorm())
                    .epsilon(1e-10));
  }
}

TEST_CASE("lyapunov functionals") {
  const Objective obj = harm110();
  ExtendedState s(vec2(1, 2), vec2(0, 0));
  CHECK(lyapunov_G(s, obj, 1.0) == doctest::Approx(20.5));

  ExtendedState eq(vec2(0, 0), vec2(0, 0));
  CHECK(lyapunov_G(eq, obj, 1.0) == 0.0);

  // eps = 0 reduces W to G.
  ExtendedState r(vec2(0.3, -0.4), vec2(1.1, 0.2), 0.5);
  CHECK(lyapunov_W(r, obj, 2.0, 0.0) ==
        doctest::Approx(lyapunov_G(r, obj, 2.0)));

  // Worked value: f=1/2, |p|^2/2=1/2, eps x.p=1/2, eps |x|^2=1/2.
  ExtendedState w(vec2(1, 0), vec2(1, 0));
  Matrix I2 = Matrix::Identity(2, 2);
  const Objective iso = make_harmonic(I2);
  CHECK(lyapunov_W(w, iso, 1.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("lyapunov W lower bound") {
  const Objective obj = harm110();
  std::mt19937 gen(29);
  std::normal_distribution<double> n;
  const double mu = 1.5;
  for (double eps : {0.0, 0.2, 0.5}) {
    for (int k = 0; k < 30; ++k) {
      ExtendedState s(vec2(n(gen), n(gen)), vec2(n(gen), n(gen)),
                      std::abs(n(gen)));
      const double w = lyapunov_W(s, obj, mu, eps);
      const double lower = obj.value(s.x) + 0.25 * s.p.squaredNorm() +
                           0.5 * mu * s.xi * s.xi +
                           0.5 * eps * s.x.squaredNorm();
      CHECK(w >= lower - 1e-12);
    }
  }
}

TEST_CASE("effective force") {
  Vector F = vec2(3, -1);
  Vector p = vec2(1, 3);  // p.F = 0
  CHECK((effective_force(vec2(0, 0), p, F, 1.0, 1.0) - F).norm() <= 1e-15);

  // p.F > 0 shrinks the force: F_eff = a F with a < 1.
  p = vec2(1, 0);
  F = vec2(0.5, 0);
  const Vector fe = effective_force(vec2(0, 0), p, F, 1.0, 1.0);
  CHECK(fe(0) / F(0) < 1.0);

  F = vec2(2, 0);
  const Vector fw = effective_force(vec2(0, 0), p, F, 1.0, 1.0);
  CHECK(fw(0) == doctest::Approx(-14.0));
  CHECK(fw(1) == doctest::Approx(0.0));
}

TEST_CASE("rayleigh dissipation") {
  CHECK(rayleigh_dissipation(Vector::Zero(2), std::nullopt, 1.0, 1.0, 1.0,
                             RayleighKind::Kinetic) == 0.0);
  CHECK(rayleigh_dissipation(vec2(1, 0), std::nullopt, 0.0, 1.0, 1.0,
                             RayleighKind::Kinetic) == doctest::Approx(0.25));
  CHECK_THROWS_AS(rayleigh_dissipation(vec2(1, 0), std::nullopt, 0.0, 1.0,
                                       1.0, RayleighKind::Force),
                  InputError);

  // Gradient of the force-kind R in p equals the cubic damping force
  // (p.F)^3 F / (alpha mu) + gamma p (finite-difference check).
  const Vector F = vec2(1.3, -0.6);
  const Vector p = vec2(0.8, 0.4);
  const double gamma = 0.9, alpha = 2.0, mu = 0.5;
  const double pf = p.dot(F);
  const Vector analytic = pf * pf * pf / (alpha * mu) * F + gamma * p;
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Vector pp = p, pm = p;
    pp(i) += h;
    pm(i) -= h;
    const double fd =
        (rayleigh_dissipation(pp, F, gamma, alpha, mu, RayleighKind::Force) -
         rayleigh_dissipation(pm, F, gamma, alpha, mu, RayleighKind::Force)) /
        (2 * h);
    CHECK(fd == doctest::Approx(analytic(i)).epsilon(1e-8));
  }
}
