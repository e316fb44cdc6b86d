#include <benchmark/benchmark.h>

#include <cstdint>

#include "srflow/carnot.hpp"
#include "srflow/obstruct.hpp"
#include "srflow/rank.hpp"

namespace {

using namespace srflow;

linalg::SparseIntMatrix random_sparse(std::uint64_t seed, std::size_t rows,
                                      std::size_t cols, int fill_percent) {
    std::uint64_t s = seed;
    auto next = [&s]() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    linalg::SparseIntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        linalg::SparseIntMatrix::Row r;
        for (std::size_t c = 0; c < cols; ++c)
            if (next() % 100 < static_cast<std::uint64_t>(fill_percent)) {
                long v = static_cast<long>(next() % 19) - 9;
                if (v) r.emplace_back(static_cast<std::uint32_t>(c), BigInt(v));
            }
        m.set_row(i, std::move(r));
    }
    return m;
}

void BM_RankModP_Random(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto m = random_sparse(17, n, n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::rank_mod_p(m, 1000003));
    }
}
BENCHMARK(BM_RankModP_Random)->Range(256, 4096);

void BM_RankExact_Random(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto m = random_sparse(23, n, n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::rank_exact(m));
    }
}
BENCHMARK(BM_RankExact_Random)->Range(256, 1024);

// The full obstruction pipeline on the parabolic 6D system; d = 4 is the
// largest desk-scale exact run of the acceptance suite.
void BM_Obstruct_Par6(benchmark::State& state) {
    auto sys = carnot::catalog_lookup("par6");
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) {
        obstruct::DecideOptions opts;
        opts.mode = obstruct::Mode::exact;
        auto rep = obstruct::decide(sys, d, opts);
        benchmark::DoNotOptimize(rep.delta);
    }
}
BENCHMARK(BM_Obstruct_Par6)->DenseRange(2, 4);

void BM_ProlongEvaluate_Par6_d6(benchmark::State& state) {
    auto sys = carnot::catalog_lookup("par6");
    auto pde = obstruct::build_pde_system(sys, 6);
    for (auto _ : state) {
        auto m = obstruct::prolong_evaluate(pde, 7); // 28512 x 20790
        benchmark::DoNotOptimize(m.nnz());
    }
}
BENCHMARK(BM_ProlongEvaluate_Par6_d6);

} // namespace

BENCHMARK_MAIN();
