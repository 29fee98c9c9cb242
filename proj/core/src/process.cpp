#include "causalbet/process.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kPmfSumTol = 1e-9;

void check_alphabets(Alphabet x, Alphabet y) {
    if (x.size < 1 || y.size < 1) throw std::invalid_argument("alphabet sizes must be >= 1");
}

void check_row(std::span<const double> row, std::size_t want, const char* what) {
    if (row.size() != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " entries, got " + std::to_string(row.size()));
    double sum = 0.0;
    for (double v : row) {
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative or NaN entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum) +
                                    ", not 1");
}

// B^n with saturation at SIZE_MAX so budget checks stay meaningful.
std::size_t pow_saturating(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa draw; identical across platforms, unlike
    // std::uniform_real_distribution.
    return double(rng() >> 11) * 0x1.0p-53;
}

int draw_from_row(std::span<const double> row, std::mt19937_64& rng) {
    double u = uniform01(rng);
    double cum = 0.0;
    int last_positive = -1;
    for (int s = 0; s < int(row.size()); ++s) {
        if (row[s] <= 0.0) continue;
        last_positive = s;
        cum += row[s];
        if (u < cum) return s;
    }
    if (last_positive < 0) throw std::invalid_argument("cannot sample from all-zero row");
    return last_positive;
}

}  // namespace

ProcessSpec ProcessSpec::iid_pairs(Alphabet x, Alphabet y, std::vector<double> joint) {
    check_alphabets(x, y);
    check_row(joint, std::size_t(x.size) * y.size, "iid pair joint");
    ProcessSpec s;
    s.mx_ = x.size;
    s.my_ = y.size;
    s.order_ = MemoryOrder::iid_pairs;
    s.iid_row_ = std::move(joint);
    return s;
}

ProcessSpec ProcessSpec::pair_markov(Alphabet x, Alphabet y, std::vector<double> initial,
                                     std::vector<std::vector<double>> transition) {
    check_alphabets(x, y);
    const std::size_t B = std::size_t(x.size) * y.size;
    check_row(initial, B, "markov initial row");
    if (transition.size() != B)
        throw std::invalid_argument("markov transition: expected " + std::to_string(B) + " rows");
    for (std::size_t i = 0; i < B; ++i) check_row(transition[i], B, "markov transition row");
    ProcessSpec s;
    s.mx_ = x.size;
    s.my_ = y.size;
    s.order_ = MemoryOrder::pair_markov;
    s.initial_ = std::move(initial);
    s.transition_ = std::move(transition);
    return s;
}

ProcessSpec ProcessSpec::full_history(Alphabet x, Alphabet y,
                                      std::vector<std::vector<std::vector<double>>> steps) {
    check_alphabets(x, y);
    const std::size_t B = std::size_t(x.size) * y.size;
    if (steps.empty()) throw std::invalid_argument("full history spec needs at least one step");
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const std::size_t rows = pow_saturating(B, int(t));
        if (steps[t].size() != rows)
            throw std::invalid_argument("full history step " + std::to_string(t) + ": expected " +
                                        std::to_string(rows) + " rows");
        for (auto& row : steps[t]) check_row(row, B, "full history kernel row");
    }
    ProcessSpec s;
    s.mx_ = x.size;
    s.my_ = y.size;
    s.order_ = MemoryOrder::full_history;
    s.steps_ = std::move(steps);
    return s;
}

std::optional<int> ProcessSpec::declared_horizon() const {
    if (order_ == MemoryOrder::full_history) return int(steps_.size());
    return std::nullopt;
}

std::span<const double> ProcessSpec::step_row(int t, std::uint64_t hist) const {
    if (t < 0) throw std::invalid_argument("step index must be >= 0");
    switch (order_) {
        case MemoryOrder::iid_pairs:
            return iid_row_;
        case MemoryOrder::pair_markov:
            if (t == 0) return initial_;
            return transition_[std::size_t(hist)];
        case MemoryOrder::full_history:
            if (std::size_t(t) >= steps_.size())
                throw std::invalid_argument("step " + std::to_string(t) +
                                            " beyond declared horizon " +
                                            std::to_string(steps_.size()));
            return steps_[std::size_t(t)][std::size_t(hist)];
    }
    std::abort();
}

std::uint64_t ProcessSpec::push_history(int t, std::uint64_t hist, int pair) const {
    (void)t;
    switch (order_) {
        case MemoryOrder::iid_pairs:
            return 0;
        case MemoryOrder::pair_markov:
            return std::uint64_t(pair);
        case MemoryOrder::full_history:
            return hist * std::uint64_t(pair_count()) + std::uint64_t(pair);
    }
    std::abort();
}

std::uint64_t ProcessSpec::reduce_history(int t, std::uint64_t full_hist) const {
    switch (order_) {
        case MemoryOrder::iid_pairs:
            return 0;
        case MemoryOrder::pair_markov:
            return t == 0 ? 0 : full_hist % std::uint64_t(pair_count());
        case MemoryOrder::full_history:
            return full_hist;
    }
    std::abort();
}

bool ProcessSpec::conditional_x(int t, std::uint64_t hist, int y, std::span<double> out) const {
    if (y < 0 || y >= my_) throw std::invalid_argument("y symbol out of range");
    if (out.size() != std::size_t(mx_)) throw std::invalid_argument("conditional output size");
    std::span<const double> row = step_row(t, hist);
    double denom = 0.0;
    for (int x = 0; x < mx_; ++x) denom += row[std::size_t(x * my_ + y)];
    if (denom <= 0.0) return false;
    for (int x = 0; x < mx_; ++x) out[std::size_t(x)] = row[std::size_t(x * my_ + y)] / denom;
    return true;
}

ProcessSpec make_markov_bsc(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("flip probability p outside [0,1]");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("crossover q outside [0,1]");
    auto obs = [q](int x, int y) { return y == x ? 1.0 - q : q; };
    std::vector<double> initial(4);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) initial[std::size_t(pair_digit(x, y, 2))] = 0.5 * obs(x, y);
    std::vector<std::vector<double>> rows(4, std::vector<double>(4));
    for (int xp = 0; xp < 2; ++xp)
        for (int yp = 0; yp < 2; ++yp) {
            auto& row = rows[std::size_t(pair_digit(xp, yp, 2))];
            for (int x = 0; x < 2; ++x) {
                double flip = x == xp ? 1.0 - p : p;
                for (int y = 0; y < 2; ++y) row[std::size_t(pair_digit(x, y, 2))] = flip * obs(x, y);
            }
        }
    return ProcessSpec::pair_markov({2}, {2}, std::move(initial), std::move(rows));
}

ProcessSpec make_iid_pair(std::vector<std::vector<double>> joint) {
    if (joint.empty()) throw std::invalid_argument("iid pair joint must be non-empty");
    const std::size_t my = joint[0].size();
    std::vector<double> flat;
    flat.reserve(joint.size() * my);
    for (auto& row : joint) {
        if (row.size() != my) throw std::invalid_argument("iid pair joint rows must be equal length");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return ProcessSpec::iid_pairs({int(joint.size())}, {int(my)}, std::move(flat));
}

JointTable::JointTable(int mx, int my, int horizon, std::vector<double> pmf)
    : mx_(mx), my_(my), horizon_(horizon), pmf_(std::move(pmf)) {
    if (mx < 1 || my < 1 || horizon < 1) throw std::invalid_argument("joint table shape");
    const std::size_t want = pow_saturating(std::size_t(mx) * my, horizon);
    if (pmf_.size() != want)
        throw std::invalid_argument("joint table: expected " + std::to_string(want) +
                                    " entries, got " + std::to_string(pmf_.size()));
    double sum = 0.0;
    for (double v : pmf_) {
        if (!(v >= 0.0)) throw std::invalid_argument("joint table: negative or NaN entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kPmfSumTol)
        throw std::invalid_argument("joint table: entries sum to " + std::to_string(sum));
}

double JointTable::prob(std::span<const int> x, std::span<const int> y) const {
    if (int(x.size()) != horizon_ || int(y.size()) != horizon_)
        throw std::invalid_argument("path length must equal the table horizon");
    const std::size_t B = std::size_t(mx_) * my_;
    std::size_t idx = 0;
    for (int t = 0; t < horizon_; ++t) {
        if (x[std::size_t(t)] < 0 || x[std::size_t(t)] >= mx_ || y[std::size_t(t)] < 0 ||
            y[std::size_t(t)] >= my_)
            throw std::invalid_argument("path symbol out of range");
        idx = idx * B + std::size_t(pair_digit(x[std::size_t(t)], y[std::size_t(t)], my_));
    }
    return pmf_[idx];
}

JointTable JointTable::swapped() const {
    const std::size_t B = std::size_t(mx_) * my_;
    std::vector<double> out(pmf_.size());
    for (std::size_t c = 0; c < pmf_.size(); ++c) {
        // Rebuild the index with x/y swapped inside every pair digit.
        std::size_t rest = c;
        std::size_t digits[64];
        int nd = 0;
        for (int t = 0; t < horizon_; ++t) {
            digits[nd++] = rest % B;
            rest /= B;
        }
        std::size_t swapped_idx = 0;
        for (int t = nd - 1; t >= 0; --t) {
            const int x = int(digits[t]) / my_;
            const int y = int(digits[t]) % my_;
            swapped_idx = swapped_idx * B + std::size_t(pair_digit(y, x, mx_));
        }
        out[swapped_idx] = pmf_[c];
    }
    return JointTable(my_, mx_, horizon_, std::move(out));
}

std::vector<double> JointTable::pair_prefix(int i) const {
    if (i < 0 || i > horizon_) throw std::invalid_argument("prefix length out of range");
    const std::size_t B = std::size_t(mx_) * my_;
    const std::size_t out_size = pow_saturating(B, i);
    const std::size_t block = pmf_.size() / out_size;
    std::vector<double> out(out_size, 0.0);
    std::size_t c = 0;
    for (std::size_t o = 0; o < out_size; ++o) {
        double acc = 0.0;
        for (std::size_t b = 0; b < block; ++b) acc += pmf_[c++];
        out[o] = acc;
    }
    return out;
}

std::vector<double> JointTable::x_marginal(int i) const {
    if (i < 0 || i > horizon_) throw std::invalid_argument("prefix length out of range");
    const std::size_t B = std::size_t(mx_) * my_;
    // Strip y_j from the back; intermediate layout (x^n, y^{j-1}) indexes as
    // pairIdx_{j-1} * mx^{n-j+1} + x-tail.
    std::vector<double> cur(pmf_);
    std::size_t tail = 1;  // mx^{n-j}
    for (int j = horizon_; j >= 1; --j) {
        const std::size_t pp = pow_saturating(B, j - 1);
        std::vector<double> next(pp * std::size_t(mx_) * tail, 0.0);
        std::size_t in = 0;
        for (std::size_t h = 0; h < pp; ++h)
            for (int x = 0; x < mx_; ++x) {
                const std::size_t out_base = (h * std::size_t(mx_) + std::size_t(x)) * tail;
                for (int y = 0; y < my_; ++y)
                    for (std::size_t t = 0; t < tail; ++t) next[out_base + t] += cur[in++];
            }
        cur = std::move(next);
        tail *= std::size_t(mx_);
    }
    // cur is now the full x^n marginal; fold the tail to length i.
    const std::size_t out_size = pow_saturating(std::size_t(mx_), i);
    const std::size_t block = cur.size() / out_size;
    std::vector<double> out(out_size, 0.0);
    std::size_t c = 0;
    for (std::size_t o = 0; o < out_size; ++o) {
        double acc = 0.0;
        for (std::size_t b = 0; b < block; ++b) acc += cur[c++];
        out[o] = acc;
    }
    return out;
}

std::vector<double> JointTable::y_marginal(int i) const {
    if (i < 0 || i > horizon_) throw std::invalid_argument("prefix length out of range");
    const std::size_t B = std::size_t(mx_) * my_;
    std::vector<double> cur(pmf_);
    std::size_t tail = 1;  // my^{n-j}
    for (int j = horizon_; j >= 1; --j) {
        const std::size_t pp = pow_saturating(B, j - 1);
        std::vector<double> next(pp * std::size_t(my_) * tail, 0.0);
        std::size_t in = 0;
        for (std::size_t h = 0; h < pp; ++h)
            for (int x = 0; x < mx_; ++x)
                for (int y = 0; y < my_; ++y) {
                    const std::size_t out_base = (h * std::size_t(my_) + std::size_t(y)) * tail;
                    for (std::size_t t = 0; t < tail; ++t) next[out_base + t] += cur[in++];
                }
        cur = std::move(next);
        tail *= std::size_t(my_);
    }
    const std::size_t out_size = pow_saturating(std::size_t(my_), i);
    const std::size_t block = cur.size() / out_size;
    std::vector<double> out(out_size, 0.0);
    std::size_t c = 0;
    for (std::size_t o = 0; o < out_size; ++o) {
        double acc = 0.0;
        for (std::size_t b = 0; b < block; ++b) acc += cur[c++];
        out[o] = acc;
    }
    return out;
}

JointTable joint_pmf(const ProcessSpec& spec, int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    if (auto h = spec.declared_horizon(); h && n > *h)
        throw std::invalid_argument("horizon " + std::to_string(n) +
                                    " beyond declared horizon " + std::to_string(*h));
    const std::size_t B = std::size_t(spec.pair_count());
    const std::size_t required = pow_saturating(B, n);
    if (required > budget) throw EnumerationBudgetError(required, budget);
    std::vector<double> cur{1.0};
    for (int t = 0; t < n; ++t) {
        std::vector<double> next(cur.size() * B);
        for (std::size_t h = 0; h < cur.size(); ++h) {
            const std::span<const double> row = spec.step_row(t, spec.reduce_history(t, h));
            const double ph = cur[h];
            for (std::size_t s = 0; s < B; ++s) next[h * B + s] = ph * row[s];
        }
        cur = std::move(next);
    }
    return JointTable(spec.mx(), spec.my(), n, std::move(cur));
}

SamplePath sample_path(const ProcessSpec& spec, int n, int lookahead, std::uint64_t seed) {
    if (n < 1 || lookahead < 0) throw std::invalid_argument("sample_path: bad horizon");
    const int total = n + lookahead;
    if (auto h = spec.declared_horizon(); h && total > *h)
        throw std::invalid_argument("sample_path: horizon beyond declared horizon");
    std::mt19937_64 rng(seed);
    SamplePath path;
    path.seed = seed;
    path.x.reserve(std::size_t(n));
    path.y.reserve(std::size_t(total));
    std::uint64_t hist = 0;
    for (int t = 0; t < total; ++t) {
        const int s = draw_from_row(spec.step_row(t, hist), rng);
        if (t < n) path.x.push_back(s / spec.my());
        path.y.push_back(s % spec.my());
        hist = spec.push_history(t, hist, s);
    }
    return path;
}

}  // namespace causalbet
