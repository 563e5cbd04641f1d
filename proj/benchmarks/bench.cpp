#include <benchmark/benchmark.h>

#include "lipschitz/mcmc.hpp"
#include "lipschitz/oracle.hpp"
#include "lipschitz/percolation.hpp"

using namespace lipschitz;

namespace {

struct Setup {
  LatticePatch patch;
  Model model;
  BoundaryCondition xi;

  Setup(LatticeKind kind, int n, double c)
      : patch(build_patch(kind, Lozenge{n})),
        model(Model::uniform(patch.graph, EdgeWeight::of(c))),
        xi(pm1_bc(patch.num_vertices(), patch.boundary)) {}
};

void BM_HeatBathSweep(benchmark::State& state) {
  Setup s(kHoneycomb, static_cast<int>(state.range(0)), 2.0);
  ChainState chain(s.model, s.xi, make_stream(1, 0));
  for (auto _ : state) chain.sweep();
  state.SetItemsProcessed(state.iterations() * s.patch.num_vertices());
}
BENCHMARK(BM_HeatBathSweep)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ClusterSweep(benchmark::State& state) {
  Setup s(kHoneycomb, static_cast<int>(state.range(0)), 4.0);
  ChainState chain(s.model, s.xi, make_stream(1, 0));
  for (int i = 0; i < 100; ++i) chain.sweep();
  for (auto _ : state) chain.cluster_sweep();
  state.SetItemsProcessed(state.iterations() * s.patch.num_vertices());
}
BENCHMARK(BM_ClusterSweep)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_Enumerate(benchmark::State& state) {
  Setup s(state.range(0) ? kSquare : kHoneycomb, state.range(0) ? 2 : 1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_heights<double>(s.model, s.xi).size());
}
BENCHMARK(BM_Enumerate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CircuitQuery(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  LatticePatch a = build_patch(kHoneycomb, Annulus{Lozenge{n}, Lozenge{3 * n}});
  Model m = Model::uniform(a.graph, EdgeWeight::of(4.0));
  BoundaryCondition xi = pm1_bc(a.num_vertices(), a.boundary);
  ChainState chain(m, xi, make_stream(2, 0));
  for (int i = 0; i < 50; ++i) chain.sweep();
  for (auto _ : state) {
    benchmark::DoNotOptimize(circuit(a, chain.omega(), GraphSide::primal));
    benchmark::DoNotOptimize(circuit(a, chain.omega(), GraphSide::dual));
  }
}
BENCHMARK(BM_CircuitQuery)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
