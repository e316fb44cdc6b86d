#include <benchmark/benchmark.h>

#include "srflow/dynamics.hpp"

namespace {

using namespace srflow::dyn;

void BM_Integrate_Chaotic(benchmark::State& state) {
    auto q = QField::q1(10.0, -0.1);
    const double tmax = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = integrate(q, {0, 0, -5, 0}, tmax, {});
        benchmark::DoNotOptimize(traj.states.size());
    }
}
BENCHMARK(BM_Integrate_Chaotic)->Arg(10)->Arg(100);

void BM_Section_Crossings(benchmark::State& state) {
    auto q = QField::q1(10.0, -0.1);
    SectionSpec spec;
    spec.coordinate = SectionSpec::Coord::z;
    spec.level = 0.0;
    spec.direction = +1;
    spec.count = state.range(0);
    for (auto _ : state) {
        auto sec = poincare_section(q, {0, 0, 0, 0}, spec, {});
        benchmark::DoNotOptimize(sec.points.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Section_Crossings)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
