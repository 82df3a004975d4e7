// Microbenchmarks for the numeric kernels and the strategy step loop.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "mies/diagnostics.hpp"
#include "mies/normal_math.hpp"
#include "mies/rng.hpp"
#include "mies/strategies.hpp"

namespace {

void BM_StdNormalCdf(benchmark::State& state) {
    double x = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mies::std_normal_cdf(x));
        x += 1.0 / 1024.0;
        if (x > 8.0) x = -8.0;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StdNormalCdf);

void BM_StdNormalQuantile(benchmark::State& state) {
    double p = 1e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mies::std_normal_quantile(p));
        p *= 1.5;
        if (p >= 0.5) p = 1e-12;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StdNormalQuantile);

void BM_SigmaLbFromPmut(benchmark::State& state) {
    double p = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mies::sigma_lb_from_pmut(p));
        p *= 1.25;
        if (p >= 1.0) p = 1e-6;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SigmaLbFromPmut);

void BM_NormalDraw(benchmark::State& state) {
    mies::Rng rng(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.normal());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalDraw);

void BM_ImprovementOracle(benchmark::State& state) {
    const double ratio = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mies::truncated_log_improvement_oracle(ratio, 4));
    }
}
BENCHMARK(BM_ImprovementOracle)->Arg(1)->Arg(8)->Arg(50);

// Full iteration throughput at the study's headline dimensions, noise
// generation included. range(0) selects the variant.
void BM_StepMixed100(benchmark::State& state) {
    const auto variant = state.range(0) == 0 ? mies::Variant::lb : mies::Variant::lub;
    mies::StrategyParams params;
    params.variant = variant;
    params.sigma_lb = mies::sigma_lb_from_pmut(1.0 / 200.0);
    const mies::ProblemSpec spec{mies::ProblemKind::lexico_sphere_int, 100, 100};
    mies::Rng rng(123);
    std::vector<double> m(100);
    for (auto& v : m) v = rng.uniform(1.0, 3.0);
    mies::StrategyState st = mies::init_state(m, std::vector<std::int64_t>(100, 0), 1.0,
                                              std::vector<double>(100, 1.0));
    mies::NoiseDraw noise;
    noise.xi_co.resize(100);
    noise.xi_in.resize(100);
    for (auto _ : state) {
        for (auto& v : noise.xi_co) v = rng.normal();
        for (auto& v : noise.xi_in) v = rng.normal();
        st = mies::step(st, params, spec, noise).state;
        benchmark::DoNotOptimize(st.log_sigma);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepMixed100)->Arg(0)->Arg(1);

void BM_Run2000Mixed20(benchmark::State& state) {
    mies::StrategyParams params;
    params.variant = mies::Variant::lub;
    params.sigma_lb = mies::sigma_lb_from_pmut(1.0 / 40.0);
    const mies::ProblemSpec spec{mies::ProblemKind::sphere_int, 20, 20};
    mies::Rng rng(5);
    std::vector<double> m(20);
    for (auto& v : m) v = rng.uniform(1.0, 3.0);
    const mies::StrategyState st0 = mies::init_state(
        m, std::vector<std::int64_t>(20, 1), 1.0, std::vector<double>(20, 1.0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto trace = mies::run(st0, params, spec, ++seed, 2000, std::nullopt);
        benchmark::DoNotOptimize(trace.final_state.log_sigma);
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_Run2000Mixed20);

} // namespace

BENCHMARK_MAIN();
