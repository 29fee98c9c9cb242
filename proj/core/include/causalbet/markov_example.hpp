#pragma once

#include <span>
#include <vector>

#include "causalbet/process.hpp"

namespace causalbet {

// Binary entropy in bits; domain [0,1].
double binary_entropy(double x);

// Flip-probability of the sum of independent Bernoulli(p) and Bernoulli(q):
// p*q = p(1-q) + q(1-p).
double bernoulli_convolve(double p, double q);

// Long-run per-race value of causally revealed noisy observations for the
// symmetric binary Markov chain: h(p*q) - h(q).
double delta_w_closed_form(double p, double q);

// Same with k extra steps of lookahead: H(Y_{k+1} | Y^k, X_0) - h(q),
// computed by exact forward enumeration over the 2^(k+1) observation paths.
double delta_w_lookahead(double p, double q, int k, int k_budget = 25);

// Value of revealing the whole observation block in advance, per race:
// (1/n) I(X^n ; Y^n).
double delta_w_full_side_info(double p, double q, int n,
                              std::size_t budget = kDefaultEnumerationBudget);

// Conditional-entropy sandwich for the hidden-Markov observation process:
// lower = H(Y_{k+1} | Y^k, X_0) and upper = H(Y_{k+1} | Y^k) squeeze the
// entropy rate from below and above as k grows.
struct EntropyBracket {
    int k = 0;
    double lower = 0.0;
    double upper = 0.0;
    double block_rate = 0.0;  // H(Y^{k+1}) / (k+1)
};

std::vector<EntropyBracket> hidden_markov_entropy_brackets(double p, double q, int k_max);

struct SweepRow {
    double value = 0.0;    // grid point (q or k)
    double delta_w = 0.0;
};

std::vector<SweepRow> sweep_q(double p, std::span<const double> q_grid);
std::vector<SweepRow> sweep_lookahead(double p, double q, std::span<const int> k_grid);

}  // namespace causalbet
