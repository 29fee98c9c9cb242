#include "causalbet/markov_example.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causalbet/causal_info.hpp"
#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

// Forward law over (x0, y^j, x_j) for the symmetric chain observed through a
// binary symmetric channel; x0 uniform, each step flips with probability p and
// emits y = x xor noise(q). Flat index ((x0 * 2^j + ypath) * 2 + xj).
struct ForwardTables {
    double p, q;
    int j = 0;
    std::vector<double> cur;

    explicit ForwardTables(double p_, double q_) : p(p_), q(q_) {
        cur = {0.5, 0.0, 0.0, 0.5};  // (x0, x0), no emissions yet
    }

    void step() {
        std::vector<double> next(cur.size() * 2, 0.0);
        const std::size_t states = cur.size() / 2;
        for (std::size_t s = 0; s < states; ++s)
            for (int xj = 0; xj < 2; ++xj) {
                const double mass = cur[s * 2 + std::size_t(xj)];
                if (mass == 0.0) continue;
                for (int xn = 0; xn < 2; ++xn) {
                    const double flip = xn == xj ? 1.0 - p : p;
                    for (int y = 0; y < 2; ++y) {
                        const double obs = y == xn ? 1.0 - q : q;
                        next[(s * 2 + std::size_t(y)) * 2 + std::size_t(xn)] += mass * flip * obs;
                    }
                }
            }
        cur = std::move(next);
        ++j;
    }

    // Entropy over (x0, y^j), folding the running state.
    double entropy_with_x0() const {
        std::vector<double> folded(cur.size() / 2, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) folded[i / 2] += cur[i];
        return entropy_bits(folded);
    }

    // Entropy over y^j alone.
    double entropy_y_only() const {
        const std::size_t half = cur.size() / 2;  // entries per x0 value
        std::vector<double> folded(half / 2, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) folded[(i % half) / 2] += cur[i];
        return entropy_bits(folded);
    }
};

void check_lookahead_budget(int j_max, std::size_t budget) {
    // Table over (x0, y^j, x_j) has 2^(j+2) entries.
    std::size_t required = 4;
    for (int i = 0; i < j_max; ++i) required *= 2;
    if (required > budget) throw EnumerationBudgetError(required, budget);
}

}  // namespace

double binary_entropy(double x) {
    check_unit(x, "binary entropy argument");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double bernoulli_convolve(double p, double q) {
    check_unit(p, "p");
    check_unit(q, "q");
    return p * (1.0 - q) + q * (1.0 - p);
}

double delta_w_closed_form(double p, double q) {
    return binary_entropy(bernoulli_convolve(p, q)) - binary_entropy(q);
}

double delta_w_lookahead(double p, double q, int k, int k_budget) {
    check_unit(p, "p");
    check_unit(q, "q");
    if (k < 0) throw std::invalid_argument("lookahead k must be >= 0");
    if (k > k_budget)
        throw EnumerationBudgetError(std::size_t(1) << std::min(k + 3, 62),
                                     std::size_t(1) << std::min(k_budget + 3, 62));
    ForwardTables fwd(p, q);
    double h_prev = 1.0;  // H(X0, Y^0) = H(X0)
    double h_cur = 1.0;
    for (int j = 1; j <= k + 1; ++j) {
        fwd.step();
        h_cur = fwd.entropy_with_x0();
        if (j <= k) h_prev = h_cur;
    }
    return h_cur - h_prev - binary_entropy(q);
}

double delta_w_full_side_info(double p, double q, int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    return mutual_information(joint_pmf(make_markov_bsc(p, q), n, budget)) / n;
}

std::vector<EntropyBracket> hidden_markov_entropy_brackets(double p, double q, int k_max) {
    check_unit(p, "p");
    check_unit(q, "q");
    if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
    check_lookahead_budget(k_max + 1, kDefaultEnumerationBudget);
    std::vector<EntropyBracket> out;
    out.reserve(std::size_t(k_max) + 1);
    ForwardTables fwd(p, q);
    double prev_with_x0 = 1.0;  // H(X0)
    double prev_y = 0.0;
    for (int j = 1; j <= k_max + 1; ++j) {
        fwd.step();
        const double with_x0 = fwd.entropy_with_x0();
        const double y_only = fwd.entropy_y_only();
        EntropyBracket b;
        b.k = j - 1;
        b.lower = with_x0 - prev_with_x0;
        b.upper = y_only - prev_y;
        b.block_rate = y_only / j;
        out.push_back(b);
        prev_with_x0 = with_x0;
        prev_y = y_only;
    }
    return out;
}

std::vector<SweepRow> sweep_q(double p, std::span<const double> q_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(q_grid.size());
    for (double q : q_grid) rows.push_back({q, delta_w_closed_form(p, q)});
    return rows;
}

std::vector<SweepRow> sweep_lookahead(double p, double q, std::span<const int> k_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(k_grid.size());
    for (int k : k_grid) rows.push_back({double(k), delta_w_lookahead(p, q, k)});
    return rows;
}

}  // namespace causalbet
