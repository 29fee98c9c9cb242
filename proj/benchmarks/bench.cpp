#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "causalbet/causal_info.hpp"
#include "causalbet/coding.hpp"
#include "causalbet/gambling.hpp"
#include "causalbet/portfolio.hpp"
#include "causalbet/process.hpp"

using namespace causalbet;

namespace {

void bm_joint_pmf(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(joint_pmf(spec, n));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_joint_pmf)->DenseRange(4, 10, 2)->Complexity();

void bm_directed_information(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const JointTable joint = joint_pmf(spec, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(directed_information(joint));
}
BENCHMARK(bm_directed_information)->DenseRange(4, 10, 2);

void bm_causal_entropy(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const JointTable joint = joint_pmf(spec, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(causal_entropy(joint));
}
BENCHMARK(bm_causal_entropy)->DenseRange(4, 10, 2);

void bm_kelly_partial_bet(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    const int m = int(state.range(0));
    std::vector<double> p(std::size_t(m), 1.0 / m), o(std::size_t(m), 0.0);
    for (double& v : o) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(kelly_partial_bet(p, o));
}
BENCHMARK(bm_kelly_partial_bet)->RangeMultiplier(2)->Range(2, 64);

void bm_log_optimal_portfolio(benchmark::State& state) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    const int outcomes = int(state.range(0));
    std::vector<PricePoint> dist{std::size_t(outcomes)};
    for (auto& point : dist) {
        point.prob = 1.0 / outcomes;
        point.relatives.resize(4);
        for (double& v : point.relatives) v = u(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(log_optimal_portfolio(dist));
}
BENCHMARK(bm_log_optimal_portfolio)->RangeMultiplier(2)->Range(4, 32);

void bm_growth_exact(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const OddsModel odds = OddsModel::uniform_fair(2);
    const int n = int(state.range(0));
    const StrategyTable strat = optimal_full_strategy(spec, n);
    for (auto _ : state) benchmark::DoNotOptimize(growth_exact(strat, spec, odds, n));
}
BENCHMARK(bm_growth_exact)->DenseRange(4, 10, 2);

void bm_growth_monte_carlo(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const OddsModel odds = OddsModel::uniform_fair(2);
    const KellyStrategy strat(spec, odds);
    const long trials = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(growth_monte_carlo(strat, spec, odds, 20, trials, 99));
    state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(bm_growth_monte_carlo)->Arg(1000)->Arg(10000);

void bm_shannon_lengths(benchmark::State& state) {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(shannon_lengths(spec, n, true));
}
BENCHMARK(bm_shannon_lengths)->DenseRange(4, 10, 2);

}  // namespace

BENCHMARK_MAIN();
