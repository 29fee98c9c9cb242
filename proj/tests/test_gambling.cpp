#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "causalbet/causal_info.hpp"
#include "causalbet/errors.hpp"
#include "causalbet/gambling.hpp"
#include "causalbet/process.hpp"
#include "oracles.hpp"

using namespace causalbet;
namespace ct = causalbet::testing;

namespace {

// KKT residual recomputed here, independent of the library's internal check.
double kelly_residual(std::span<const double> p, std::span<const double> odds,
                      const PartialBet& bet) {
    double staked = bet.cash;
    for (double b : bet.bets) staked += b;
    double res = std::abs(staked - 1.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double ret = bet.cash + bet.bets[i] * odds[i];
        const double ratio = p[i] * odds[i] / ret;
        if (bet.bets[i] > 1e-12)
            res = std::max(res, std::abs(ratio - 1.0));
        else
            res = std::max(res, std::max(0.0, ratio - 1.0));
    }
    if (bet.cash > 1e-12) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] / (bet.cash + bet.bets[i] * odds[i]);
        res = std::max(res, std::abs(sum - 1.0));
    }
    return res;
}

}  // namespace

TEST_CASE("kelly partial bet: worked examples") {
    const std::vector<double> o = {1.2, 1.2};

    const PartialBet a = kelly_partial_bet(std::vector<double>{0.9, 0.1}, o);
    CHECK(a.cash == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(a.bets[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(a.bets[1] == doctest::Approx(0.0));
    CHECK(a.growth_bits == doctest::Approx(0.02623162173324893).epsilon(1e-12));

    const PartialBet b = kelly_partial_bet(std::vector<double>{0.5, 0.5}, o);
    CHECK(b.cash == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.bets[0] == doctest::Approx(0.0));
    CHECK(b.bets[1] == doctest::Approx(0.0));
    CHECK(b.growth_bits == doctest::Approx(0.0));

    // Tied p*o resolved by horse index; the third horse stays out.
    const PartialBet c = kelly_partial_bet(std::vector<double>{0.45, 0.45, 0.1},
                                           std::vector<double>{2.5, 2.5, 1.25});
    CHECK(c.cash == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.bets[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.bets[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.bets[2] == doctest::Approx(0.0));
}

TEST_CASE("kelly partial bet: fair and super-fair odds bet everything") {
    const PartialBet fair = kelly_partial_bet(std::vector<double>{0.3, 0.7},
                                              std::vector<double>{10.0 / 3.0, 10.0 / 7.0});
    CHECK(fair.cash == doctest::Approx(0.0));
    CHECK(fair.bets[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fair.bets[1] == doctest::Approx(0.7).epsilon(1e-12));

    const PartialBet super = kelly_partial_bet(std::vector<double>{0.5, 0.5},
                                               std::vector<double>{3.0, 3.0});
    CHECK(super.cash == doctest::Approx(0.0));
    CHECK(super.growth_bits == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
}

TEST_CASE("kelly partial bet: random instances satisfy KKT and match the grid oracle") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> pick_m(2, 4);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = pick_m(rng);
        const std::vector<double> p = ct::random_pmf(rng, m, true);
        std::vector<double> o(std::size_t(m), 0.0);
        for (double& v : o) v = u(rng);

        const PartialBet bet = kelly_partial_bet(p, o);
        CHECK(kelly_residual(p, o, bet) <= 1e-9);

        double inv = 0.0;
        for (double v : o) inv += 1.0 / v;
        if (inv > 1.0 + 1e-9) CHECK(bet.cash > 0.0);

        const double oracle = ct::kelly_grid_oracle(p, o);
        CHECK(bet.growth_bits >= oracle - 1e-9);
        CHECK(bet.growth_bits - oracle <= 1e-3);
    }
}

TEST_CASE("odds classification and rows") {
    const OddsModel fair = OddsModel::uniform_fair(3);
    CHECK(fair.classify(0, {}) == OddsClass::fair);
    CHECK(fair.at(5, std::vector<int>{1, 2, 0, 1, 2})[0] == doctest::Approx(3.0));

    CHECK(OddsModel::constant({3.0, 3.0}).classify(0, {}) == OddsClass::super_fair);
    CHECK(OddsModel::constant({1.5, 1.5}).classify(0, {}) == OddsClass::sub_fair);

    const OddsModel markov = OddsModel::markov({2.0, 2.0}, {{4.0, 1.5}, {1.5, 4.0}});
    CHECK(markov.at(0, {})[0] == doctest::Approx(2.0));
    const std::vector<int> past = {0, 1};
    CHECK(markov.at(2, past)[0] == doctest::Approx(1.5));  // row of the last winner

    const OddsModel steps = OddsModel::per_step({{{2.0, 2.0}}, {{3.0, 1.2}, {1.2, 3.0}}});
    const std::vector<int> one = {1};
    CHECK(steps.at(1, one)[0] == doctest::Approx(1.2));
    CHECK_THROWS_AS(steps.at(2, past), std::out_of_range);
}

TEST_CASE("strategy tables validate and serve rows") {
    StrategyTable table(2, 2, 2, true);
    Allocation good;
    good.cash = 0.25;
    good.bets = {0.5, 0.25};
    table.set_row(0, 0, good);
    CHECK(table.has_row(0, 0));
    CHECK_FALSE(table.has_row(0, 1));

    Allocation bad = good;
    bad.bets[0] = -0.1;
    CHECK_THROWS_AS(table.set_row(0, 1, bad), std::invalid_argument);
    bad = good;
    bad.cash = 0.5;  // sums to 1.25
    CHECK_THROWS_AS(table.set_row(0, 1, bad), std::invalid_argument);

    const std::vector<int> no_x = {};
    const std::vector<int> y0 = {0};
    const Allocation got = table.allocate(no_x, y0);
    CHECK(got.cash == doctest::Approx(0.25));
    CHECK(got.bets[0] == doctest::Approx(0.5));
    const std::vector<int> y1 = {1};
    CHECK_THROWS_AS(table.allocate(no_x, y1), StrategyUndefinedError);

    const std::string csv = table.to_csv();
    CHECK(csv.substr(0, csv.find('\n')) == "t,history,cash,b0,b1");
}

TEST_CASE("proportional strategy follows the kernel conditionals") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const ProportionalStrategy prop(spec);
    const std::vector<int> no_x = {};
    const std::vector<int> y0 = {0};
    const Allocation first = prop.allocate(no_x, y0);
    CHECK(first.cash == doctest::Approx(0.0));
    // p(x1 = 0 | y1 = 0) = (1-q) / 1 = 0.75 by symmetry of the uniform start.
    CHECK(first.bets[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(first.bets[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("growth identity: W = E log odds - causal entropy") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const OddsModel odds = OddsModel::uniform_fair(2);
    const int n = 4;
    const StrategyTable strat = optimal_full_strategy(spec, n);
    const GrowthReport rep = growth_exact(strat, spec, odds, n);
    CHECK(rep.w_bits == doctest::Approx(1.3913073836278556).epsilon(1e-9));
    REQUIRE(rep.e_log_odds.has_value());
    REQUIRE(rep.h_causal.has_value());
    CHECK(*rep.e_log_odds == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.w_bits == doctest::Approx(*rep.e_log_odds - *rep.h_causal).epsilon(1e-9));
    CHECK(*rep.h_causal == doctest::Approx(causal_entropy(joint_pmf(spec, n))).epsilon(1e-9));
}

TEST_CASE("blind optimum: W = E log odds - H(X^n)") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 6; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const OddsModel odds = OddsModel::uniform_fair(spec.mx());
        const int n = 3;
        const GrowthReport rep = growth_exact(optimal_blind_strategy(spec, n), spec, odds, n);
        const double h_x = entropy_bits(joint_pmf(spec, n).x_marginal(n));
        CHECK(rep.w_bits ==
              doctest::Approx(n * std::log2(double(spec.mx())) - h_x).epsilon(1e-9));
    }
}

TEST_CASE("side information premium equals directed information per race") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 12; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 1 + trial % 3;
        const OddsModel odds = ct::random_odds(rng, spec.mx(), n);
        const double dw = delta_growth(spec, odds, n);
        const double di = directed_information(joint_pmf(spec, n)).directed_info / n;
        CHECK(dw == doctest::Approx(di).epsilon(1e-9));
    }
}

TEST_CASE("no full-investment strategy beats proportional betting") {
    std::mt19937_64 rng(34);
    for (int s = 0; s < 8; ++s) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 1 + s % 3;
        const OddsModel odds = OddsModel::uniform_fair(spec.mx());
        const double best = growth_exact(optimal_full_strategy(spec, n), spec, odds, n).w_bits;
        for (int trial = 0; trial < 10; ++trial) {
            const StrategyTable rival = ct::random_full_strategy(rng, spec, n);
            CHECK(growth_exact(rival, spec, odds, n).w_bits <= best + 1e-9);
        }
    }
}

TEST_CASE("partial-investment optimum coincides with proportional under fair odds") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 5; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 2;
        const OddsModel odds = OddsModel::uniform_fair(spec.mx());
        const double full = growth_exact(optimal_full_strategy(spec, n), spec, odds, n).w_bits;
        const double part =
            growth_exact(optimal_partial_strategy(spec, odds, n), spec, odds, n).w_bits;
        CHECK(part == doctest::Approx(full).epsilon(1e-9));
    }
}

TEST_CASE("partial-investment optimum is never below the full-investment one") {
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 10; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 2;
        const OddsModel odds = ct::random_odds(rng, spec.mx(), n);
        const double full = growth_exact(optimal_full_strategy(spec, n), spec, odds, n).w_bits;
        const double part =
            growth_exact(optimal_partial_strategy(spec, odds, n), spec, odds, n).w_bits;
        CHECK(part >= full - 1e-9);
    }
}

TEST_CASE("monte carlo growth agrees with enumeration and is seed-deterministic") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const OddsModel odds = OddsModel::uniform_fair(2);
    const int n = 6;
    const StrategyTable strat = optimal_partial_strategy(spec, odds, n);
    const GrowthReport exact = growth_exact(strat, spec, odds, n);
    const GrowthReport mc = growth_monte_carlo(strat, spec, odds, n, 40000, 4242);
    REQUIRE(mc.mc_estimate.has_value());
    REQUIRE(mc.mc_stderr.has_value());
    CHECK(std::abs(*mc.mc_estimate - exact.w_bits) <= 4.0 * *mc.mc_stderr);

    const GrowthReport again = growth_monte_carlo(strat, spec, odds, n, 40000, 4242);
    CHECK(*again.mc_estimate == *mc.mc_estimate);
    CHECK(*again.mc_stderr == *mc.mc_stderr);
    const GrowthReport other = growth_monte_carlo(strat, spec, odds, n, 40000, 4243);
    CHECK(*other.mc_estimate != *mc.mc_estimate);
}

TEST_CASE("wealth trajectory multiplies out the per-race factors") {
    const ProcessSpec spec = make_markov_bsc(0.2, 0.25);
    const OddsModel odds = OddsModel::uniform_fair(2);
    const KellyStrategy strat(spec, odds);
    const SamplePath path = sample_path(spec, 10, 0, 5);
    const WealthTrajectory traj = wealth_trajectory(strat, odds, path.x, path.y);
    REQUIRE(traj.per_race_factor.size() == 10);
    REQUIRE(traj.cumulative_log2.size() == 10);
    double acc = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        acc += std::log2(traj.per_race_factor[i]);
        CHECK(traj.cumulative_log2[i] == doctest::Approx(acc).epsilon(1e-9));
    }
}

TEST_CASE("kelly strategy allocates the single-race solution at each history") {
    const ProcessSpec spec = make_iid_pair({{0.9 * 0.9, 0.9 * 0.1}, {0.1 * 0.9, 0.1 * 0.1}});
    // X independent of Y with p = (0.9, 0.1); sub-fair odds (1.2, 1.2).
    const OddsModel odds = OddsModel::constant({1.2, 1.2});
    const KellyStrategy strat(spec, odds);
    const std::vector<int> no_x = {};
    const std::vector<int> y0 = {0};
    const Allocation a = strat.allocate(no_x, y0);
    CHECK(a.cash == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(a.bets[0] == doctest::Approx(0.4).epsilon(1e-9));
}
