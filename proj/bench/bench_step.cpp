#include <benchmark/benchmark.h>

#include "dcqw/disorder.hpp"
#include "dcqw/propagator.hpp"
#include "dcqw/walk.hpp"

using namespace dcqw;

namespace {

struct Setup {
  ChainGeometry geom;
  CoinField field;
  WalkState psi;

  explicit Setup(int L) : geom{L, Boundary::periodic} {
    DisorderSpec d;
    d.kind = DisorderKind::rim_static;
    d.dtheta = 0.3;
    Rng rng(1);
    field = realize_field(d, L, 0, rng);
    psi = WalkState::zero(geom);
    for (int i = 0; i < geom.dim(); ++i) psi.amp[i] = cplx(1.0 / (1 + i % 7), 0.1 * (i % 3));
    psi.amp.normalize();
  }
};

void BM_step_reference(benchmark::State& st) {
  Setup s(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    s.psi = step_reference(s.psi, s.field, 0, FluxGauge{0.5});
    benchmark::DoNotOptimize(s.psi.amp.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_step_openmp(benchmark::State& st) {
  Setup s(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    s.psi = step(s.psi, s.field, 0, FluxGauge{0.5});
    benchmark::DoNotOptimize(s.psi.amp.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// Full-chain state, so the window covers everything from the first step.
void BM_propagator(benchmark::State& st) {
  Setup s(static_cast<int>(st.range(0)));
  Propagator p(s.psi, s.field, FluxGauge{0.5}, {0.0, st.range(1) != 0, false});
  for (auto _ : st) p.advance();
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_step_reference)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_step_openmp)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_propagator)->Args({1000, 0})->Args({10000, 0})->Args({100000, 0})->Args({100000, 1});

BENCHMARK_MAIN();
