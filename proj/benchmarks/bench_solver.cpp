// Kernels of one slab solve on the conv1 level-1 system (k = 2, Q3/P2disc).

#include <benchmark/benchmark.h>

#include <memory>

#include "stbiot/experiments.hpp"

using namespace stbiot;

namespace {

struct Fixture {
  RunConfig c;
  MeshHierarchy mesh;
  std::unique_ptr<SpaceTimeSolver> solver;
  Vector b;

  static RunConfig config(bool single_precision) {
    RunConfig c;
    c.k = 2;
    c.r = 3;
    c.young = 100.0;
    c.poisson = 0.35;
    c.single_precision = single_precision;
    return c;
  }

  explicit Fixture(bool single_precision)
      : c(config(single_precision)), mesh(build_hierarchy(c.domain(), c.base_refinements + 1)) {
    solver = std::make_unique<SpaceTimeSolver>(mesh, tag_function(c), c.solver_setup(c.tau0 / 2));
    b = Vector::Ones(solver->slab_operator().size());
  }
};

Fixture& fixture(bool single) {
  static Fixture d(false), s(true);
  return single ? s : d;
}

void BM_SlabMatvec(benchmark::State& state) {
  const auto& f = fixture(false);
  Vector y;
  for (auto _ : state) {
    f.solver->slab_operator().apply(f.b, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["unknowns"] = static_cast<double>(f.b.size());
}

void BM_VankaSweep(benchmark::State& state) {
  const auto& f = fixture(state.range(0) != 0);
  const auto& mg = f.solver->mg();
  const VankaSmoother& S = *mg.level(mg.n_levels() - 1).smoother;
  for (auto _ : state) {
    Vector d = Vector::Zero(f.b.size());
    S.sweep(d, f.b);
    benchmark::DoNotOptimize(d.data());
  }
  state.counters["patches"] = S.n_patches();
}

void BM_VCycle(benchmark::State& state) {
  const auto& f = fixture(state.range(0) != 0);
  for (auto _ : state) {
    Vector x = f.solver->mg().apply(f.b);
    benchmark::DoNotOptimize(x.data());
  }
}

void BM_SlabSolve(benchmark::State& state) {
  const auto& f = fixture(false);
  for (auto _ : state) {
    Vector x = Vector::Zero(f.b.size());
    const SolveStats st = fgmres(f.solver->slab_operator(), f.b, x,
                                 [&](const Vector& r) { return f.solver->mg().apply(r); }, {0.0, 1e-8, 100});
    state.counters["iterations"] = st.iterations;
  }
}

}  // namespace

BENCHMARK(BM_SlabMatvec)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VankaSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VCycle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlabSolve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
