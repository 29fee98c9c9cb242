#include "causalbet/causal_info.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "causalbet/csv.hpp"
#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

constexpr double kCrossCheckTol = 1e-9;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// (x^i, y^i) -> (x^{i-1}, y^i); output index pp * my + y_i.
std::vector<double> marg_last_x(const std::vector<double>& t, int mx, int my) {
    const std::size_t B = std::size_t(mx) * my;
    std::vector<double> u(t.size() / std::size_t(mx), 0.0);
    const std::size_t pp_count = t.size() / B;
    std::size_t in = 0;
    for (std::size_t pp = 0; pp < pp_count; ++pp)
        for (int x = 0; x < mx; ++x)
            for (int y = 0; y < my; ++y) u[pp * std::size_t(my) + std::size_t(y)] += t[in++];
    return u;
}

// (x^i, y^i) -> (x^i, y^{i-1}); output index pp * mx + x_i.
std::vector<double> marg_last_y(const std::vector<double>& t, int mx, int my) {
    const std::size_t B = std::size_t(mx) * my;
    std::vector<double> v(t.size() / std::size_t(my), 0.0);
    const std::size_t pp_count = t.size() / B;
    std::size_t in = 0;
    for (std::size_t pp = 0; pp < pp_count; ++pp)
        for (int x = 0; x < mx; ++x) {
            const std::size_t out = pp * std::size_t(mx) + std::size_t(x);
            for (int y = 0; y < my; ++y) v[out] += t[in++];
        }
    return v;
}

// Fold the least-significant digit of any table.
std::vector<double> fold_last(const std::vector<double>& t, int radix) {
    std::vector<double> out(t.size() / std::size_t(radix), 0.0);
    std::size_t in = 0;
    for (std::size_t o = 0; o < out.size(); ++o)
        for (int d = 0; d < radix; ++d) out[o] += t[in++];
    return out;
}

// Mixed table over (x^a, y^b), b >= a, laid out pairIdx_a * my^(b-a) + y-tail:
// marginalize x_a.
std::vector<double> strip_last_x_mixed(const std::vector<double>& t, int mx, int my,
                                       std::size_t y_tail) {
    const std::size_t B = std::size_t(mx) * my;
    std::vector<double> out(t.size() / std::size_t(mx), 0.0);
    const std::size_t pp_count = t.size() / (B * y_tail);
    std::size_t in = 0;
    for (std::size_t pp = 0; pp < pp_count; ++pp)
        for (int x = 0; x < mx; ++x)
            for (int y = 0; y < my; ++y) {
                const std::size_t out_base = (pp * std::size_t(my) + std::size_t(y)) * y_tail;
                for (std::size_t tail = 0; tail < y_tail; ++tail) out[out_base + tail] += t[in++];
            }
    return out;
}

struct Cascade {
    // levels[i-1] holds the (x^i, y^i) prefix table for i = 1..n-1; level n is
    // the joint itself. u[i-1] holds the (x^{i-1}, y^i) table for i = 1..n.
    std::vector<std::vector<double>> t;
    std::vector<std::vector<double>> u;
    std::vector<double> per_step;  // H(X_i | X^{i-1}, Y^i), i = 1..n
};

Cascade build_cascade(const JointTable& j) {
    const int n = j.horizon();
    Cascade c;
    c.t.resize(std::size_t(n) - 1);
    c.u.resize(std::size_t(n));
    c.per_step.assign(std::size_t(n), 0.0);
    const std::vector<double>* level = &j.pmf();
    double h_level = entropy_bits(*level);
    for (int i = n; i >= 1; --i) {
        std::vector<double> u = marg_last_x(*level, j.mx(), j.my());
        const double h_u = entropy_bits(u);
        c.per_step[std::size_t(i) - 1] = h_level - h_u;
        std::vector<double> next = fold_last(u, j.my());
        c.u[std::size_t(i) - 1] = std::move(u);
        if (i > 1) {
            c.t[std::size_t(i) - 2] = std::move(next);
            level = &c.t[std::size_t(i) - 2];
            h_level = entropy_bits(*level);
        }
    }
    return c;
}

// Product table over full pair paths: prod[c] = p(x^n || y^{n-delay}) for the
// path c encodes, NaN where a conditioning event has probability zero. With
// delay 1 the value depends on y_n only through nothing (it is constant in
// y_n); keeping the full pair-path domain keeps the recursion uniform.
std::vector<double> causal_product_table(const JointTable& j, const Cascade& c, int delay) {
    const int n = j.horizon();
    const int mx = j.mx();
    const int my = j.my();
    const std::size_t B = std::size_t(mx) * my;
    std::vector<double> g{1.0};
    for (int i = 1; i <= n; ++i) {
        const std::vector<double>& ti = (i == n) ? j.pmf() : c.t[std::size_t(i) - 1];
        std::vector<double> vi;
        if (delay == 1) vi = marg_last_y(ti, mx, my);
        std::vector<double> next(ti.size());
        for (std::size_t pp = 0; pp < ti.size(); ++pp) {
            const std::size_t parent = pp / B;
            const std::size_t s = pp % B;
            double factor;
            if (delay == 0) {
                const double denom = c.u[std::size_t(i) - 1][parent * std::size_t(my) + s % std::size_t(my)];
                factor = denom > 0.0 ? ti[pp] / denom : kNaN;
            } else {
                const double denom = (i == 1) ? 1.0 : c.t[std::size_t(i) - 2][parent];
                factor = denom > 0.0 ? vi[parent * std::size_t(mx) + s / std::size_t(my)] / denom
                                     : kNaN;
            }
            next[pp] = g[parent] * factor;
        }
        g = std::move(next);
    }
    return g;
}

}  // namespace

double entropy_bits(std::span<const double> pmf) {
    // Extended-precision accumulator: tables can hold tens of millions of
    // entries and the two directed-information routes are cross-checked at
    // 1e-9, which plain double accumulation cannot hold at that size.
    long double h = 0.0L;
    for (double p : pmf)
        if (p > 0.0) h -= static_cast<long double>(p) * std::log2(p);
    return static_cast<double>(h);
}

CausalPmfTable::CausalPmfTable(int mx, int my, int horizon, int delay, std::vector<double> values)
    : mx_(mx), my_(my), horizon_(horizon), delay_(delay), values_(std::move(values)) {
    if (mx < 1 || my < 1 || horizon < 1) throw std::invalid_argument("causal pmf shape");
    if (delay != 0 && delay != 1) throw std::invalid_argument("delay must be 0 or 1");
    const std::size_t want = ipow(std::size_t(mx), horizon) * ipow(std::size_t(my), horizon - delay);
    if (values_.size() != want) throw std::invalid_argument("causal pmf size mismatch");
}

double CausalPmfTable::at(std::span<const int> x, std::span<const int> y) const {
    if (int(x.size()) != horizon_ || int(y.size()) != horizon_ - delay_)
        throw std::invalid_argument("causal pmf path lengths");
    std::size_t xi = 0;
    for (int v : x) {
        if (v < 0 || v >= mx_) throw std::invalid_argument("x symbol out of range");
        xi = xi * std::size_t(mx_) + std::size_t(v);
    }
    std::size_t yi = 0;
    for (int v : y) {
        if (v < 0 || v >= my_) throw std::invalid_argument("y symbol out of range");
        yi = yi * std::size_t(my_) + std::size_t(v);
    }
    return values_[xi * ipow(std::size_t(my_), horizon_ - delay_) + yi];
}

bool CausalPmfTable::defined(std::span<const int> x, std::span<const int> y) const {
    return !std::isnan(at(x, y));
}

CausalPmfTable causal_conditional_pmf(const JointTable& joint, int delay) {
    if (delay != 0 && delay != 1) throw std::invalid_argument("delay must be 0 or 1");
    const int n = joint.horizon();
    const int mx = joint.mx();
    const int my = joint.my();
    const std::size_t B = std::size_t(mx) * my;
    const Cascade c = build_cascade(joint);
    const std::vector<double> g = causal_product_table(joint, c, delay);

    // Remap the pair-path layout to x-index-major layout; with delay 1 the
    // value is constant in y_n, so overlapping writes agree.
    const std::size_t ytail = ipow(std::size_t(my), n - delay);
    std::vector<double> out(ipow(std::size_t(mx), n) * ytail);
    for (std::size_t cidx = 0; cidx < g.size(); ++cidx) {
        std::size_t rest = cidx;
        int xs[64], ys[64];
        for (int t = n - 1; t >= 0; --t) {
            const std::size_t s = rest % B;
            rest /= B;
            xs[t] = int(s) / my;
            ys[t] = int(s) % my;
        }
        std::size_t xi = 0;
        for (int t = 0; t < n; ++t) xi = xi * std::size_t(mx) + std::size_t(xs[t]);
        std::size_t yi = 0;
        for (int t = 0; t < n - delay; ++t) yi = yi * std::size_t(my) + std::size_t(ys[t]);
        out[xi * ytail + yi] = g[cidx];
    }
    return CausalPmfTable(mx, my, n, delay, std::move(out));
}

double causal_entropy(const JointTable& joint) {
    const int my = joint.my();
    const std::vector<double>* level = &joint.pmf();
    std::vector<double> cur;
    double h = 0.0;
    for (int i = joint.horizon(); i >= 1; --i) {
        std::vector<double> u = marg_last_x(*level, joint.mx(), my);
        h += entropy_bits(*level) - entropy_bits(u);
        cur = fold_last(u, my);
        level = &cur;
    }
    return h;
}

std::string InfoReport::csv_header() { return "n,H_Xn,H_causal,directed_info,mutual_info"; }

std::string InfoReport::csv_row() const {
    return csv_join({std::to_string(horizon), format_sig(h_x), format_sig(h_x_causal_y),
                     format_sig(directed_info), format_sig(mutual_info)});
}

InfoReport directed_information(const JointTable& joint) {
    const int n = joint.horizon();
    const int mx = joint.mx();

    // Per-step marginal entropies of X^i.
    std::vector<double> hx(std::size_t(n) + 1, 0.0);
    {
        std::vector<double> m = joint.x_marginal(n);
        for (int i = n; i >= 1; --i) {
            hx[std::size_t(i)] = entropy_bits(m);
            m = fold_last(m, mx);
        }
    }

    const Cascade c = build_cascade(joint);
    double h_causal = 0.0;
    for (double term : c.per_step) h_causal += term;

    // Independent route: -E[log2 p(X^n || Y^n)] over the materialized product.
    long double h_path_acc = 0.0L;
    {
        const std::vector<double> prod = causal_product_table(joint, c, 0);
        const std::vector<double>& pmf = joint.pmf();
        for (std::size_t i = 0; i < pmf.size(); ++i)
            if (pmf[i] > 0.0) h_path_acc -= static_cast<long double>(pmf[i]) * std::log2(prod[i]);
    }
    const double h_path = static_cast<double>(h_path_acc);
    if (std::abs(h_causal - h_path) > kCrossCheckTol)
        throw InternalInconsistencyError(
            "causal entropy routes disagree: block-entropy " + std::to_string(h_causal) +
            " vs pathwise " + std::to_string(h_path));

    InfoReport r;
    r.horizon = n;
    r.h_x = hx[std::size_t(n)];
    r.h_x_causal_y = h_causal;
    r.directed_info = r.h_x - h_causal;
    r.mutual_info = mutual_information(joint);
    r.per_step_terms.resize(std::size_t(n));
    for (int i = 1; i <= n; ++i)
        r.per_step_terms[std::size_t(i) - 1] =
            (hx[std::size_t(i)] - hx[std::size_t(i) - 1]) - c.per_step[std::size_t(i) - 1];
    return r;
}

double mutual_information(const JointTable& joint) {
    const std::vector<double> mxn = joint.x_marginal(joint.horizon());
    const std::vector<double> myn = joint.y_marginal(joint.horizon());
    return entropy_bits(mxn) + entropy_bits(myn) - entropy_bits(joint.pmf());
}

double directed_information_lookahead(const JointTable& joint, int n, int k) {
    if (n < 1 || k < 0) throw std::invalid_argument("lookahead horizons must satisfy n>=1, k>=0");
    if (joint.horizon() != n + k)
        throw std::invalid_argument("joint horizon " + std::to_string(joint.horizon()) +
                                    " must equal n + k = " + std::to_string(n + k));
    const int mx = joint.mx();
    const int my = joint.my();

    double h_x = entropy_bits(joint.x_marginal(n));
    double causal_sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        // V over (x^i, y^{i+k}) from the (x^{i+k}, y^{i+k}) prefix.
        std::vector<double> v = joint.pair_prefix(i + k);
        std::size_t y_tail = 1;
        for (int j = 0; j < k; ++j) {
            v = strip_last_x_mixed(v, mx, my, y_tail);
            y_tail *= std::size_t(my);
        }
        const double h_with_xi = entropy_bits(v);
        v = strip_last_x_mixed(v, mx, my, y_tail);
        causal_sum += h_with_xi - entropy_bits(v);
    }
    return h_x - causal_sum;
}

}  // namespace causalbet
