#include <benchmark/benchmark.h>

#include "fad/integrators.hpp"
#include "fad/potentials.hpp"
#include "fad/rng.hpp"

using namespace fad;

namespace {

Objective cluster(int n, PairKind kind) {
  ClusterSpec spec;
  spec.n_atoms = n;
  spec.pair_kind = kind;
  return make_cluster(spec);
}

Vector random_cluster_positions(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vector q(3 * n);
  // Spread atoms out enough to avoid the singularity guard.
  for (int i = 0; i < q.size(); ++i) q(i) = 3.0 * rng.uniform();
  return q;
}

void bm_lj_gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Objective obj = cluster(n, PairKind::LennardJones);
  const Vector q = random_cluster_positions(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(obj.gradient(q));
}
BENCHMARK(bm_lj_gradient)->Arg(38)->Arg(75);

void bm_morse_gradient(benchmark::State& state) {
  const Objective obj = cluster(64, PairKind::Morse);
  const Vector q = random_cluster_positions(64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(obj.gradient(q));
}
BENCHMARK(bm_morse_gradient);

SchemeConfig cfg_for(Scheme s) {
  SchemeConfig cfg;
  cfg.scheme = s;
  cfg.dt = 0.01;
  cfg.params.gamma = 1.0;
  return cfg;
}

void bm_step_rosenbrock(benchmark::State& state) {
  const Objective obj = make_rosenbrock();
  const Scheme s = static_cast<Scheme>(state.range(0));
  Integrator integ(obj, cfg_for(s));
  ExtendedState st(Vector::Zero(2), Vector::Zero(2));
  st.x << -0.5, 1.5;
  for (auto _ : state) {
    integ.step(st);
    benchmark::DoNotOptimize(st.x.data());
  }
}
BENCHMARK(bm_step_rosenbrock)
    ->Arg(static_cast<int>(Scheme::LdhdBadab))
    ->Arg(static_cast<int>(Scheme::FadDabcbad))
    ->Arg(static_cast<int>(Scheme::FadAltCprime))
    ->Arg(static_cast<int>(Scheme::AdamOde));

void bm_fad_step_lj75(benchmark::State& state) {
  const Objective obj = cluster(75, PairKind::LennardJones);
  SchemeConfig cfg = cfg_for(Scheme::FadDabcbad);
  Integrator integ(obj, cfg);
  ExtendedState st(random_cluster_positions(75, 3), Vector::Zero(225));
  for (auto _ : state) {
    integ.step(st);
    benchmark::DoNotOptimize(st.x.data());
  }
}
BENCHMARK(bm_fad_step_lj75);

void bm_coupling_exp_apply(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(4);
  Vector F(d), v(d);
  for (int i = 0; i < d; ++i) {
    F(i) = rng.normal();
    v(i) = rng.normal();
  }
  const Coupling c = Coupling::mixture(0.5, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(coupling_exp_apply(c, -0.01, F, v));
}
BENCHMARK(bm_coupling_exp_apply)->Arg(2)->Arg(225);

void bm_rng_normal(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(bm_rng_normal);

void bm_baoab_morse64(benchmark::State& state) {
  const Objective obj = cluster(64, PairKind::Morse);
  ExtendedState st(random_cluster_positions(64, 6), Vector::Zero(192));
  Rng rng(7);
  for (auto _ : state) {
    baoab_step(st, obj, 1.0, 10.0, 1e-3, rng);
    benchmark::DoNotOptimize(st.x.data());
  }
}
BENCHMARK(bm_baoab_morse64);

}  // namespace

BENCHMARK_MAIN();
