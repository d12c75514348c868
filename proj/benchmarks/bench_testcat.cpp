#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "testcat/contingency.hpp"
#include "testcat/montecarlo.hpp"
#include "testcat/randomize.hpp"
#include "testcat/special_functions.hpp"
#include "testcat/testcat.hpp"

namespace tc = testcat;

namespace {

tc::CategoricalDataset synthetic(std::uint32_t n, std::uint32_t attrs, std::uint32_t card,
                                 std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<std::string> names;
    for (std::uint32_t m = 0; m < attrs; ++m) names.push_back("x" + std::to_string(m));
    std::vector<std::vector<std::string>> rows(n);
    for (auto& row : rows) {
        row.reserve(attrs);
        for (std::uint32_t m = 0; m < attrs; ++m)
            row.push_back("v" + std::to_string(eng() % card));
    }
    return tc::make_dataset(std::move(names), rows);
}

void bm_chi2_survival(benchmark::State& state) {
    double x = 1.0;
    for (auto _ : state) {
        x = x < 2000.0 ? x + 0.37 : 1.0;
        benchmark::DoNotOptimize(tc::chi2_survival(x, 180).log_e);
    }
}
BENCHMARK(bm_chi2_survival);

void bm_pair_table(benchmark::State& state) {
    auto ds = synthetic(static_cast<std::uint32_t>(state.range(0)), 2, 4, 7);
    for (auto _ : state) {
        auto t = tc::build_table(ds, 0, 1);
        benchmark::DoNotOptimize(tc::chi_squared(t).statistic);
    }
}
BENCHMARK(bm_pair_table)->Arg(100)->Arg(1000)->Arg(10000);

void bm_pipeline(benchmark::State& state) {
    auto ds = synthetic(366, static_cast<std::uint32_t>(state.range(0)), 4, 11);
    tc::TestConfig cfg;
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(tc::testcat_pvalue(ds, cfg).chi2_sum);
}
BENCHMARK(bm_pipeline)->Arg(8)->Arg(16)->Arg(33);

void bm_generate_crds(benchmark::State& state) {
    auto ds = synthetic(static_cast<std::uint32_t>(state.range(0)), 16, 4, 13);
    std::uint64_t rep = 0;
    for (auto _ : state) benchmark::DoNotOptimize(tc::generate_crds(ds, 1, rep++).n_objects);
}
BENCHMARK(bm_generate_crds)->Arg(101)->Arg(1000);

void bm_mc_pair(benchmark::State& state) {
    auto ds = synthetic(200, 2, 3, 17);
    auto t = tc::build_table(ds, 0, 1);
    tc::MonteCarloConfig cfg;
    cfg.replicates = static_cast<std::uint32_t>(state.range(0));
    cfg.seed = 1;
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(tc::mc_pair_pvalue(t, cfg));
}
BENCHMARK(bm_mc_pair)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
