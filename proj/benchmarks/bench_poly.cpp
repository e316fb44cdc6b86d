#include <benchmark/benchmark.h>

#include "srflow/carnot.hpp"
#include "srflow/integrals.hpp"
#include "srflow/phase_poly.hpp"

namespace {

using namespace srflow;
using poly::PhasePolynomial;

void BM_PolyMul_Hamiltonian8D(benchmark::State& state) {
    auto sys = carnot::catalog_lookup("dim8_2358");
    for (auto _ : state) {
        benchmark::DoNotOptimize(sys.u1 * sys.u1 + sys.u2 * sys.u2);
    }
}
BENCHMARK(BM_PolyMul_Hamiltonian8D);

void BM_PoissonBracket_8D(benchmark::State& state) {
    auto sys = carnot::catalog_lookup("dim8_23568");
    auto I8 = integrals::integral_sets_for("dim8_23568").front().members.back().second;
    for (auto _ : state) {
        benchmark::DoNotOptimize(poisson_bracket(sys.hamiltonian2, I8));
    }
}
BENCHMARK(BM_PoissonBracket_8D);

void BM_RealizationClosure_Dim7(benchmark::State& state) {
    auto sys = carnot::catalog_lookup("dim7");
    for (auto _ : state) {
        benchmark::DoNotOptimize(carnot::verify_realization(sys).passed);
    }
}
BENCHMARK(BM_RealizationClosure_Dim7);

} // namespace

BENCHMARK_MAIN();
