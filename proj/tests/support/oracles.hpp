#pragma once

// Slow, obviously-correct reference implementations the tests check the
// library against, plus random instance generators. Everything here favors
// directness over speed: marginals are recomputed by full-table scans.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "causalbet/causal_info.hpp"
#include "causalbet/gambling.hpp"
#include "causalbet/process.hpp"

namespace causalbet::testing {

// P(x^a, y^b) by scanning every full path of the joint (a, b <= horizon).
double brute_prefix_prob(const JointTable& joint, std::span<const int> x, std::span<const int> y);

// prod_i p(x_i | x^{i-1}, y^{i-delay}) from brute-force marginals; NaN when
// some factor conditions on a zero-probability event.
double naive_causal_product(const JointTable& joint, int delay, std::span<const int> x,
                            std::span<const int> y);

double naive_causal_entropy(const JointTable& joint);        // H(X^n || Y^n)
double naive_directed_information(const JointTable& joint);  // I(Y^n -> X^n)

// Exhaustive simplex search for max_b E[log2(cash + b(x) o(x))]: global grid,
// then repeated local refinement around the incumbent down to `step`. Always
// a lower bound on the true optimum (it only evaluates feasible points).
double kelly_grid_oracle(std::span<const double> p, std::span<const double> odds,
                         double step = 1e-4);

struct RandomSpecOptions {
    int max_mx = 3;
    int max_my = 3;
    int horizon = 3;  // table depth for full_history specs
    bool strictly_positive = true;
};

ProcessSpec random_spec(std::mt19937_64& rng, const RandomSpecOptions& opt = {});
OddsModel random_odds(std::mt19937_64& rng, int horses, int horizon);
std::vector<double> random_pmf(std::mt19937_64& rng, int size, bool strictly_positive);

// Random full-investment betting table over every (x^t, y^{t+1}) history.
StrategyTable random_full_strategy(std::mt19937_64& rng, const ProcessSpec& spec, int n);

// X uniform on {0,1,2,3}, Y = [X >= 2]. All conditionals are dyadic, so
// Shannon coding meets the entropy bound exactly and side information saves
// exactly one bit per symbol.
ProcessSpec dyadic_pair_spec();

}  // namespace causalbet::testing
