#include <benchmark/benchmark.h>

#include "discovery/extensions.hpp"
#include "discovery/oracle.hpp"
#include "discovery/payoffs.hpp"
#include "discovery/regions.hpp"

using namespace discovery;

namespace {
const PriorSpec kFig{{-0.5, 0.2}, {0.05, 0.2}, 0.25};
const Weights kHalf{{0.5, 0.5}};
}

static void BM_StdNormalCdf(benchmark::State& state) {
    double x = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_normal_cdf(x));
        x += 1e-4;
        if (x > 8.0) x = -8.0;
    }
}
BENCHMARK(BM_StdNormalCdf);

static void BM_Quantile(benchmark::State& state) {
    double p = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_normal_quantile(p));
        p += 1e-5;
        if (p > 0.999999) p = 1e-6;
    }
}
BENCHMARK(BM_Quantile);

static void BM_BivariateRect(benchmark::State& state) {
    double a = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bivariate_rect_prob(a, 0.3, 0.55));
        a += 0.01;
        if (a > 2.0) a = -2.0;
    }
}
BENCHMARK(BM_BivariateRect);

static void BM_DiscoverOne(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(utility_discover_one(kFig, kHalf, 0));
    }
}
BENCHMARK(BM_DiscoverOne);

static void BM_DiscoverBoth(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(utility_discover_both(kFig, kHalf));
    }
}
BENCHMARK(BM_DiscoverBoth);

static void BM_ClassifyCell(benchmark::State& state) {
    const RegionParams params{0.05, 0.2, 0.25, 2.0 / 3.0};
    const std::vector<DiscoveryRule> rules = {DiscoveryRule::none(), DiscoveryRule::one(0),
                                              DiscoveryRule::one(1)};
    double mu = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(mu, 0.4, params, rules));
        mu += 0.001;
        if (mu > 1.0) mu = 0.1;
    }
}
BENCHMARK(BM_ClassifyCell);

static void BM_McPass(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_utility(kFig, kHalf, DiscoveryRule::one(0), n, 7));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_McPass)->Arg(100000);

static void BM_SequentialValue(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sequential_value(kFig, kHalf));
    }
}
BENCHMARK(BM_SequentialValue);

BENCHMARK_MAIN();
