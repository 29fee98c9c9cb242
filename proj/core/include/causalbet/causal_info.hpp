#pragma once

#include <span>
#include <string>
#include <vector>

#include "causalbet/process.hpp"

namespace causalbet {

// Shannon entropy of a pmf in bits; 0 log 0 = 0. The argument need not be
// normalized (block entropies of sub-tables use this too).
double entropy_bits(std::span<const double> pmf);

// Causally conditioned pmf p(x^n || y^{n-d}) = prod_i p(x_i | x^{i-1}, y^{i-d}),
// delay d in {0,1}; factors with i - d <= 0 drop the y condition entirely.
// Entries conditioned on probability-zero events are NaN.
class CausalPmfTable {
public:
    CausalPmfTable(int mx, int my, int horizon, int delay, std::vector<double> values);

    int mx() const noexcept { return mx_; }
    int my() const noexcept { return my_; }
    int horizon() const noexcept { return horizon_; }
    int delay() const noexcept { return delay_; }

    // Index layout: x-path index * my^(horizon-delay) + y-path index.
    const std::vector<double>& values() const noexcept { return values_; }

    // x has length horizon, y has length horizon - delay.
    double at(std::span<const int> x, std::span<const int> y) const;
    bool defined(std::span<const int> x, std::span<const int> y) const;

private:
    int mx_;
    int my_;
    int horizon_;
    int delay_;
    std::vector<double> values_;
};

CausalPmfTable causal_conditional_pmf(const JointTable& joint, int delay);

// H(X^n || Y^n) = sum_i H(X_i | X^{i-1}, Y^i), in bits.
double causal_entropy(const JointTable& joint);

struct InfoReport {
    int horizon = 0;
    double h_x = 0.0;           // H(X^n)
    double h_x_causal_y = 0.0;  // H(X^n || Y^n)
    double directed_info = 0.0; // I(Y^n -> X^n)
    double mutual_info = 0.0;   // I(X^n ; Y^n)
    std::vector<double> per_step_terms;  // I(X_i ; Y^i | X^{i-1})

    static std::string csv_header();
    std::string csv_row() const;
};

// Directed information via block entropies, cross-checked against the
// pathwise -E[log2 p(x^n||y^n)] route; disagreement beyond 1e-9 throws
// InternalInconsistencyError.
InfoReport directed_information(const JointTable& joint);

double mutual_information(const JointTable& joint);

// I(Y^{n+k} -> X^n) with k steps of lookahead:
// H(X^n) - sum_{i=1..n} H(X_i | X^{i-1}, Y^{i+k}).
// The joint must cover horizon n + k.
double directed_information_lookahead(const JointTable& joint, int n, int k);

}  // namespace causalbet
