#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace causalbet {

// Ceiling on dense-table sizes for exact enumeration; every op that builds or
// walks a full table takes a budget parameter defaulting to this.
inline constexpr std::size_t kDefaultEnumerationBudget = 10'000'000;

struct Alphabet {
    int size = 0;
};

enum class MemoryOrder { iid_pairs, pair_markov, full_history };

// Index conventions shared by all dense tables in this library.
//
//   pair digit          s = x * my + y,             s in [0, B), B = mx * my
//   pair path (x^t,y^t) idx = sum_j s_j * B^(t-j)   step 1 most significant
//   x path x^t          idx = sum_j x_j * mx^(t-j)  likewise for y paths
//
// Big-endian step order makes every prefix marginal a contiguous block sum.
inline int pair_digit(int x, int y, int my) { return x * my + y; }

// Joint law of the pair process ((X_1,Y_1),...,(X_n,Y_n)). Step kernels give
// p(x_t, y_t | (x,y)^{t-1}); Y_t is the side signal revealed before X_t.
class ProcessSpec {
public:
    // Pairs drawn independently from one joint table (row-major in x).
    static ProcessSpec iid_pairs(Alphabet x, Alphabet y, std::vector<double> joint);

    // First-order Markov in the pair: initial pair law plus one transition row
    // per previous pair digit.
    static ProcessSpec pair_markov(Alphabet x, Alphabet y, std::vector<double> initial,
                                   std::vector<std::vector<double>> transition);

    // Fully general finite-horizon law: steps[t] holds one row per pair
    // history index (B^t rows of length B).
    static ProcessSpec full_history(Alphabet x, Alphabet y,
                                    std::vector<std::vector<std::vector<double>>> steps);

    int mx() const noexcept { return mx_; }
    int my() const noexcept { return my_; }
    int pair_count() const noexcept { return mx_ * my_; }
    MemoryOrder memory_order() const noexcept { return order_; }

    // Longest horizon the spec can drive; empty for iid / markov (unbounded).
    std::optional<int> declared_horizon() const;

    // Kernel row p(.,. | history) for step t (0-based), addressed by reduced
    // history index (see reduce/push below). Length B, x-major.
    std::span<const double> step_row(int t, std::uint64_t hist) const;

    // Reduced history bookkeeping: iid keeps nothing, markov keeps the last
    // pair digit, full history keeps the whole index. Using reduced indices
    // lets long simulations avoid 64-bit overflow.
    std::uint64_t push_history(int t, std::uint64_t hist, int pair) const;
    std::uint64_t reduce_history(int t, std::uint64_t full_hist) const;

    // p(x_t = . | history, y_t) into out (length mx). Returns false when
    // p(y_t | history) == 0, leaving out untouched.
    bool conditional_x(int t, std::uint64_t hist, int y, std::span<double> out) const;

    // Raw kernel access for serialization; each is meaningful only for the
    // matching memory order.
    const std::vector<double>& iid_row() const noexcept { return iid_row_; }
    const std::vector<double>& initial_row() const noexcept { return initial_; }
    const std::vector<std::vector<double>>& transition_rows() const noexcept { return transition_; }
    const std::vector<std::vector<std::vector<double>>>& step_tables() const noexcept {
        return steps_;
    }

private:
    ProcessSpec() = default;

    int mx_ = 0;
    int my_ = 0;
    MemoryOrder order_ = MemoryOrder::iid_pairs;
    std::vector<double> iid_row_;
    std::vector<double> initial_;
    std::vector<std::vector<double>> transition_;
    std::vector<std::vector<std::vector<double>>> steps_;
};

// Binary symmetric Markov chain X (flip probability p, uniform start) observed
// through a binary symmetric channel with crossover q; noise iid over time.
ProcessSpec make_markov_bsc(double p, double q);

// Convenience wrapper over iid_pairs taking the joint as rows indexed by x.
ProcessSpec make_iid_pair(std::vector<std::vector<double>> joint);

// Dense joint law of (X^n, Y^n); index layout as documented above.
class JointTable {
public:
    JointTable(int mx, int my, int horizon, std::vector<double> pmf);

    int mx() const noexcept { return mx_; }
    int my() const noexcept { return my_; }
    int horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return pmf_.size(); }
    const std::vector<double>& pmf() const noexcept { return pmf_; }

    double prob(std::span<const int> x, std::span<const int> y) const;

    // Same law with the roles of X and Y exchanged.
    JointTable swapped() const;

    // Prefix marginals, i in [0, horizon].
    std::vector<double> pair_prefix(int i) const;  // over (x^i, y^i)
    std::vector<double> x_marginal(int i) const;   // over x^i
    std::vector<double> y_marginal(int i) const;   // over y^i

private:
    int mx_;
    int my_;
    int horizon_;
    std::vector<double> pmf_;
};

JointTable joint_pmf(const ProcessSpec& spec, int n,
                     std::size_t budget = kDefaultEnumerationBudget);

struct SamplePath {
    std::vector<int> x;  // length n
    std::vector<int> y;  // length n + lookahead
    std::uint64_t seed = 0;
};

// Draws one path; with lookahead k the y sequence extends k steps past x.
SamplePath sample_path(const ProcessSpec& spec, int n, int lookahead, std::uint64_t seed);

}  // namespace causalbet
