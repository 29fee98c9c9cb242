#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "causalbet/errors.hpp"
#include "causalbet/gambling.hpp"
#include "causalbet/portfolio.hpp"
#include "causalbet/process.hpp"
#include "oracles.hpp"

using namespace causalbet;
namespace ct = causalbet::testing;

namespace {

std::vector<PricePoint> two_stock_race(double p, double o1, double o2) {
    return {{p, {o1, 0.0}}, {1.0 - p, {0.0, o2}}};
}

}  // namespace

TEST_CASE("pure horse race: log-optimal weights are the outcome probabilities") {
    const std::vector<PricePoint> dist = two_stock_race(0.3, 2.0, 2.0);
    const Portfolio b = log_optimal_portfolio(dist);
    CHECK(b.weights[0] == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(b.weights[1] == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(portfolio_kkt_residual(b, dist) <= 1e-9);
}

TEST_CASE("dominated stock gets nothing") {
    const std::vector<PricePoint> dist = {{0.5, {1.0, 2.0}}, {0.5, {1.0, 2.0}}};
    const Portfolio b = log_optimal_portfolio(dist);
    CHECK(b.weights[0] == doctest::Approx(0.0));
    CHECK(b.weights[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(expected_log_growth(b, dist) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("all-cash market is flat") {
    const std::vector<PricePoint> dist = {{0.4, {1.0, 1.0}}, {0.6, {1.0, 1.0}}};
    const Portfolio b = log_optimal_portfolio(dist);
    CHECK(expected_log_growth(b, dist) == doctest::Approx(0.0));
    CHECK(portfolio_kkt_residual(b, dist) <= 1e-9);
}

TEST_CASE("infeasible distribution is rejected") {
    const std::vector<PricePoint> dist = {{0.5, {2.0, 0.0}}, {0.5, {0.0, 0.0}}};
    CHECK_THROWS_AS(log_optimal_portfolio(dist), InfeasibleDistributionError);
}

TEST_CASE("embedded kelly example: weights split between winner stock and cash") {
    const std::vector<PricePoint> dist = {{0.9, {1.2, 0.0, 1.0}}, {0.1, {0.0, 1.2, 1.0}}};
    const Portfolio b = log_optimal_portfolio(dist);
    CHECK(b.weights[0] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(b.weights[1] == doctest::Approx(0.0));
    CHECK(b.weights[2] == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(expected_log_growth(b, dist) ==
          doctest::Approx(0.02623162173324893).epsilon(1e-8));
}

TEST_CASE("random markets: KKT residual small, beats pure stocks and uniform") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> pick_m(2, 4), pick_s(2, 3);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int outcomes = pick_m(rng), stocks = pick_s(rng);
        std::vector<PricePoint> dist{std::size_t(outcomes)};
        const std::vector<double> probs = ct::random_pmf(rng, outcomes, true);
        for (int i = 0; i < outcomes; ++i) {
            dist[std::size_t(i)].prob = probs[std::size_t(i)];
            dist[std::size_t(i)].relatives.resize(std::size_t(stocks));
            for (double& v : dist[std::size_t(i)].relatives) v = u(rng);
        }
        const Portfolio best = log_optimal_portfolio(dist);
        CHECK(portfolio_kkt_residual(best, dist) <= 1e-9);
        const double w = expected_log_growth(best, dist);
        for (int j = 0; j < stocks; ++j) {
            Portfolio pure;
            pure.weights.assign(std::size_t(stocks), 0.0);
            pure.weights[std::size_t(j)] = 1.0;
            CHECK(w >= expected_log_growth(pure, dist) - 1e-9);
        }
        Portfolio uniform;
        uniform.weights.assign(std::size_t(stocks), 1.0 / stocks);
        CHECK(w >= expected_log_growth(uniform, dist) - 1e-9);
    }
}

TEST_CASE("horse race embedding shape") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const MarketSpec market = horse_race_embedding(spec, OddsModel::constant({1.7, 2.4}));
    CHECK(market.stocks() == 3);
    CHECK(market.relatives(0)[0] == doctest::Approx(1.7));
    CHECK(market.relatives(0)[1] == doctest::Approx(0.0));
    CHECK(market.relatives(0)[2] == doctest::Approx(1.0));
    CHECK(market.relatives(1)[1] == doctest::Approx(2.4));

    const OddsModel varying = OddsModel::markov({2.0, 2.0}, {{2.0, 2.0}, {2.0, 2.0}});
    CHECK_THROWS_AS(horse_race_embedding(spec, varying), std::invalid_argument);
}

TEST_CASE("embedded portfolio growth equals partial-investment gambling growth") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.4, 3.0);
    for (int trial = 0; trial < 8; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 1 + trial % 3;
        std::vector<double> o(std::size_t(spec.mx()), 0.0);
        for (double& v : o) v = u(rng);
        const OddsModel odds = OddsModel::constant(o);

        const MarketSpec market = horse_race_embedding(spec, odds);
        const OptimalCausalPortfolio strat(market);
        const double w_port = causal_portfolio_growth(strat, market, n).w_bits;
        const double w_gamble =
            growth_exact(optimal_partial_strategy(spec, odds, n), spec, odds, n).w_bits;
        CHECK(w_port == doctest::Approx(w_gamble).epsilon(1e-6));
    }
}

TEST_CASE("causal portfolio beats the side-blind one") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 2;
        std::vector<double> o(std::size_t(spec.mx()), 2.2);
        const MarketSpec market = horse_race_embedding(spec, OddsModel::constant(o));
        const double causal =
            causal_portfolio_growth(OptimalCausalPortfolio(market), market, n).w_bits;
        const double blind =
            causal_portfolio_growth(optimal_blind_portfolio(market, n), market, n).w_bits;
        CHECK(causal >= blind - 1e-9);
    }
}

TEST_CASE("market spec validates shapes") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    CHECK_THROWS_AS(MarketSpec(spec, {{1.0, 2.0}}), std::invalid_argument);  // one row per x
    CHECK_THROWS_AS(MarketSpec(spec, {{1.0, 2.0}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MarketSpec(spec, {{1.0, -2.0}, {1.0, 0.5}}), std::invalid_argument);
}

TEST_CASE("non-convergence error carries the residual") {
    const std::vector<PricePoint> dist = two_stock_race(0.35, 2.1, 1.9);
    PortfolioSolveOptions opt;
    opt.max_iters = 1;
    opt.tol = 1e-14;
    try {
        log_optimal_portfolio(dist, opt);
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.residual() > 0.0);
    }
}
