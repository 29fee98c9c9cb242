#include "causalbet/gambling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "causalbet/causal_info.hpp"
#include "causalbet/csv.hpp"
#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

constexpr double kKktTol = 1e-9;
constexpr double kFairnessTol = 1e-12;

std::size_t pow_saturating(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

void check_odds_row(std::span<const double> row, std::size_t want, const char* what) {
    if (row.size() != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " odds");
    for (double o : row)
        if (!(o > 0.0)) throw std::invalid_argument(std::string(what) + ": odds must be positive");
}

std::size_t x_index(std::span<const int> x_prev, int mx) {
    std::size_t idx = 0;
    for (int x : x_prev) {
        if (x < 0 || x >= mx) throw std::invalid_argument("x symbol out of range");
        idx = idx * std::size_t(mx) + std::size_t(x);
    }
    return idx;
}

std::vector<int> decode_x_digits(std::uint64_t hist, int t, int my, int B) {
    std::vector<int> xs(std::size_t(t), 0);
    for (int j = t - 1; j >= 0; --j) {
        xs[std::size_t(j)] = int(hist % std::uint64_t(B)) / my;
        hist /= std::uint64_t(B);
    }
    return xs;
}

Allocation uniform_allocation(int mx) {
    return Allocation{0.0, std::vector<double>(std::size_t(mx), 1.0 / mx)};
}


}  // namespace

OddsModel OddsModel::uniform_fair(int horses) {
    if (horses < 1) throw std::invalid_argument("need at least one horse");
    return constant(std::vector<double>(std::size_t(horses), double(horses)));
}

OddsModel OddsModel::constant(std::vector<double> odds) {
    check_odds_row(odds, odds.size(), "constant odds");
    if (odds.empty()) throw std::invalid_argument("need at least one horse");
    OddsModel m;
    m.kind_ = OddsKind::constant;
    m.horses_ = int(odds.size());
    m.first_ = std::move(odds);
    return m;
}

OddsModel OddsModel::markov(std::vector<double> first, std::vector<std::vector<double>> rows) {
    if (first.empty()) throw std::invalid_argument("need at least one horse");
    const std::size_t m = first.size();
    check_odds_row(first, m, "markov odds first row");
    if (rows.size() != m) throw std::invalid_argument("markov odds: need one row per horse");
    for (auto& r : rows) check_odds_row(r, m, "markov odds row");
    OddsModel om;
    om.kind_ = OddsKind::markov;
    om.horses_ = int(m);
    om.first_ = std::move(first);
    om.rows_ = std::move(rows);
    return om;
}

OddsModel OddsModel::per_step(std::vector<std::vector<std::vector<double>>> tables) {
    if (tables.empty() || tables[0].size() != 1 || tables[0][0].empty())
        throw std::invalid_argument("per-step odds: first step needs exactly one row");
    const std::size_t m = tables[0][0].size();
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (tables[t].size() != pow_saturating(m, int(t)))
            throw std::invalid_argument("per-step odds: step " + std::to_string(t) +
                                        " needs " + std::to_string(pow_saturating(m, int(t))) +
                                        " rows");
        for (auto& r : tables[t]) check_odds_row(r, m, "per-step odds row");
    }
    OddsModel om;
    om.kind_ = OddsKind::per_step;
    om.horses_ = int(m);
    om.tables_ = std::move(tables);
    return om;
}

std::span<const double> OddsModel::at(int t, std::span<const int> x_prev) const {
    if (t < 0 || std::size_t(t) != x_prev.size())
        throw std::invalid_argument("odds lookup: t must equal the history length");
    switch (kind_) {
        case OddsKind::constant:
            return first_;
        case OddsKind::markov:
            return t == 0 ? std::span<const double>(first_)
                          : std::span<const double>(rows_[std::size_t(x_prev.back())]);
        case OddsKind::per_step:
            if (std::size_t(t) >= tables_.size())
                throw std::out_of_range("odds lookup beyond declared steps");
            return tables_[std::size_t(t)][x_index(x_prev, horses_)];
    }
    std::abort();
}

OddsClass OddsModel::classify(int t, std::span<const int> x_prev) const {
    double s = 0.0;
    for (double o : at(t, x_prev)) s += 1.0 / o;
    if (std::abs(s - 1.0) <= kFairnessTol) return OddsClass::fair;
    return s < 1.0 ? OddsClass::super_fair : OddsClass::sub_fair;
}

StrategyTable::StrategyTable(int mx, int my, int horizon, bool uses_side_info)
    : mx_(mx), my_(my), horizon_(horizon), uses_side_info_(uses_side_info) {
    if (mx < 1 || my < 1 || horizon < 1) throw std::invalid_argument("strategy table shape");
    rows_.resize(std::size_t(horizon));
    defined_.resize(std::size_t(horizon));
    for (int t = 0; t < horizon; ++t) {
        const std::size_t histories =
            uses_side_info ? pow_saturating(std::size_t(mx) * my, t) * std::size_t(my)
                           : pow_saturating(std::size_t(mx), t);
        rows_[std::size_t(t)].assign(histories * std::size_t(mx + 1), 0.0);
        defined_[std::size_t(t)].assign(histories, 0);
    }
}

void StrategyTable::set_row(int t, std::uint64_t hist, Allocation row) {
    if (t < 0 || t >= horizon_) throw std::invalid_argument("strategy row step out of range");
    auto& d = defined_[std::size_t(t)];
    if (hist >= d.size()) throw std::invalid_argument("strategy row history out of range");
    if (int(row.bets.size()) != mx_) throw std::invalid_argument("strategy row needs mx bets");
    double sum = row.cash;
    if (row.cash < -1e-12) throw std::invalid_argument("strategy row: negative cash");
    for (double b : row.bets) {
        if (b < -1e-12) throw std::invalid_argument("strategy row: negative bet");
        sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("strategy row: allocation must sum to 1");
    double* dst = rows_[std::size_t(t)].data() + std::size_t(hist) * std::size_t(mx_ + 1);
    dst[0] = row.cash;
    for (int x = 0; x < mx_; ++x) dst[x + 1] = row.bets[std::size_t(x)];
    d[std::size_t(hist)] = 1;
}

bool StrategyTable::has_row(int t, std::uint64_t hist) const {
    return t >= 0 && t < horizon_ && hist < defined_[std::size_t(t)].size() &&
           defined_[std::size_t(t)][std::size_t(hist)];
}

std::uint64_t StrategyTable::history_index(std::span<const int> x_prev,
                                           std::span<const int> y_seen) const {
    const int t = int(x_prev.size());
    if (uses_side_info_) {
        if (y_seen.size() != x_prev.size() + 1)
            throw std::invalid_argument("strategy lookup: need y_seen one longer than x_prev");
        std::uint64_t idx = 0;
        for (int j = 0; j < t; ++j)
            idx = idx * std::uint64_t(mx_ * my_) +
                  std::uint64_t(pair_digit(x_prev[std::size_t(j)], y_seen[std::size_t(j)], my_));
        return idx * std::uint64_t(my_) + std::uint64_t(y_seen[std::size_t(t)]);
    }
    return x_index(x_prev, mx_);
}

Allocation StrategyTable::allocate(std::span<const int> x_prev,
                                   std::span<const int> y_seen) const {
    const int t = int(x_prev.size());
    if (t >= horizon_)
        throw StrategyUndefinedError("strategy table has no step " + std::to_string(t));
    const std::uint64_t hist = history_index(x_prev, y_seen);
    if (!defined_[std::size_t(t)][std::size_t(hist)])
        throw StrategyUndefinedError("strategy table has no row for step " + std::to_string(t) +
                                     ", history " + std::to_string(hist));
    const double* src = rows_[std::size_t(t)].data() + std::size_t(hist) * std::size_t(mx_ + 1);
    Allocation a;
    a.cash = src[0];
    a.bets.assign(src + 1, src + 1 + mx_);
    return a;
}

std::string StrategyTable::to_csv() const {
    std::string out = "t,history,cash";
    for (int x = 0; x < mx_; ++x) out += ",b" + std::to_string(x);
    out += '\n';
    for (int t = 0; t < horizon_; ++t) {
        const auto& d = defined_[std::size_t(t)];
        for (std::size_t h = 0; h < d.size(); ++h) {
            if (!d[h]) continue;
            const double* src = rows_[std::size_t(t)].data() + h * std::size_t(mx_ + 1);
            out += std::to_string(t) + ',' + std::to_string(h) + ',' + format_sig(src[0]);
            for (int x = 0; x < mx_; ++x) out += ',' + format_sig(src[x + 1]);
            out += '\n';
        }
    }
    return out;
}

ProportionalStrategy::ProportionalStrategy(ProcessSpec spec) : spec_(std::move(spec)) {}

Allocation ProportionalStrategy::allocate(std::span<const int> x_prev,
                                          std::span<const int> y_seen) const {
    const int t = int(x_prev.size());
    if (y_seen.size() != x_prev.size() + 1)
        throw std::invalid_argument("allocate: need y_seen one longer than x_prev");
    std::uint64_t hist = 0;
    for (int j = 0; j < t; ++j)
        hist = spec_.push_history(
            j, hist, pair_digit(x_prev[std::size_t(j)], y_seen[std::size_t(j)], spec_.my()));
    Allocation a;
    a.cash = 0.0;
    a.bets.assign(std::size_t(spec_.mx()), 0.0);
    if (!spec_.conditional_x(t, hist, y_seen[std::size_t(t)], a.bets))
        return uniform_allocation(spec_.mx());
    return a;
}

KellyStrategy::KellyStrategy(ProcessSpec spec, OddsModel odds)
    : spec_(std::move(spec)), odds_(std::move(odds)) {
    if (odds_.horses() != spec_.mx())
        throw std::invalid_argument("odds must cover the x alphabet");
}

Allocation KellyStrategy::allocate(std::span<const int> x_prev,
                                   std::span<const int> y_seen) const {
    const int t = int(x_prev.size());
    if (y_seen.size() != x_prev.size() + 1)
        throw std::invalid_argument("allocate: need y_seen one longer than x_prev");
    std::uint64_t hist = 0;
    for (int j = 0; j < t; ++j)
        hist = spec_.push_history(
            j, hist, pair_digit(x_prev[std::size_t(j)], y_seen[std::size_t(j)], spec_.my()));
    std::vector<double> cond(std::size_t(spec_.mx()), 0.0);
    if (!spec_.conditional_x(t, hist, y_seen[std::size_t(t)], cond))
        return uniform_allocation(spec_.mx());
    PartialBet pb = kelly_partial_bet(cond, odds_.at(t, x_prev));
    return Allocation{pb.cash, std::move(pb.bets)};
}

PartialBet kelly_partial_bet(std::span<const double> p, std::span<const double> odds) {
    const std::size_t m = p.size();
    if (m == 0 || odds.size() != m)
        throw std::invalid_argument("kelly: probability and odds vectors must match");
    double psum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("kelly: probabilities must be >= 0");
        psum += v;
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("kelly: probabilities must sum to 1");
    for (double o : odds)
        if (!(o > 0.0)) throw std::invalid_argument("kelly: odds must be positive");

    PartialBet out;
    out.bets.assign(m, 0.0);
    double inv_sum = 0.0;
    for (double o : odds) inv_sum += 1.0 / o;

    if (inv_sum <= 1.0 + kFairnessTol) {
        // Fair or super-fair: full investment proportional to beliefs.
        out.cash = 0.0;
        for (std::size_t i = 0; i < m; ++i) out.bets[i] = p[i];
    } else {
        // Water-filling: admit horses by descending p*o while p*o clears the
        // current cash level t = (1 - sum_A p) / (1 - sum_A 1/o).
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double pa = p[a] * odds[a], pb = p[b] * odds[b];
            if (pa != pb) return pa > pb;
            return a < b;
        });
        double t = 1.0;
        double sp = 0.0, si = 0.0;
        std::size_t admitted = 0;
        for (std::size_t idx : order) {
            if (!(p[idx] * odds[idx] > t)) break;
            sp += p[idx];
            si += 1.0 / odds[idx];
            if (1.0 - si <= 0.0) break;  // cannot happen for sub-fair odds; defensive
            t = (1.0 - sp) / (1.0 - si);
            ++admitted;
        }
        out.cash = t;
        for (std::size_t j = 0; j < admitted; ++j) {
            const std::size_t idx = order[j];
            out.bets[idx] = p[idx] - t / odds[idx];
        }
    }

    double growth = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (p[i] > 0.0) growth += p[i] * std::log2(out.cash + out.bets[i] * odds[i]);
    out.growth_bits = growth;

    // KKT certificate, lambda = 1: payout-weighted returns hit 1 on the
    // support, stay <= 1 off it; same for the cash coordinate.
    double alloc_sum = out.cash;
    double cash_term = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        alloc_sum += out.bets[i];
        const double s = out.cash + out.bets[i] * odds[i];
        if (p[i] > 0.0) cash_term += p[i] / s;
        const double r = p[i] * odds[i] / s;
        const bool active = out.bets[i] > 1e-15;
        if ((active && std::abs(r - 1.0) > kKktTol) || (!active && r > 1.0 + kKktTol))
            throw InternalInconsistencyError("kelly solution violates stationarity");
    }
    if (std::abs(alloc_sum - 1.0) > 1e-12)
        throw InternalInconsistencyError("kelly solution leaves the simplex");
    if ((out.cash > 1e-15 && std::abs(cash_term - 1.0) > kKktTol) ||
        (out.cash <= 1e-15 && cash_term > 1.0 + kKktTol))
        throw InternalInconsistencyError("kelly solution violates the cash condition");
    return out;
}

namespace {

struct GrowthAccumulator {
    double w = 0.0;
    double e_log_odds = 0.0;
    bool full_investment = true;
};

void growth_walk(const BettingStrategy& strategy, const ProcessSpec& spec, const OddsModel& odds,
                 int n, int t, std::uint64_t hist, double prob, std::vector<int>& x_prev,
                 std::vector<int>& y_seen, GrowthAccumulator& acc) {
    if (t == n) return;
    const std::span<const double> row = spec.step_row(t, hist);
    const std::span<const double> odds_row = odds.at(t, x_prev);
    const int mx = spec.mx(), my = spec.my();
    for (int y = 0; y < my; ++y) {
        double py = 0.0;
        for (int x = 0; x < mx; ++x) py += row[std::size_t(pair_digit(x, y, my))];
        if (prob * py <= 0.0) continue;
        y_seen.push_back(y);
        const Allocation a = strategy.allocate(x_prev, y_seen);
        if (a.cash > 1e-12) acc.full_investment = false;
        for (int x = 0; x < mx; ++x) {
            const double p_child = prob * row[std::size_t(pair_digit(x, y, my))];
            if (p_child <= 0.0) continue;
            const double factor = a.cash + a.bets[std::size_t(x)] * odds_row[std::size_t(x)];
            acc.w += p_child * std::log2(factor);
            acc.e_log_odds += p_child * std::log2(odds_row[std::size_t(x)]);
            x_prev.push_back(x);
            growth_walk(strategy, spec, odds, n, t + 1,
                        spec.push_history(t, hist, pair_digit(x, y, my)), p_child, x_prev, y_seen,
                        acc);
            x_prev.pop_back();
        }
        y_seen.pop_back();
    }
}

}  // namespace

GrowthReport growth_exact(const BettingStrategy& strategy, const ProcessSpec& spec,
                          const OddsModel& odds, int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    if (odds.horses() != spec.mx()) throw std::invalid_argument("odds must cover the x alphabet");
    const std::size_t required = pow_saturating(std::size_t(spec.pair_count()), n);
    if (required > budget) throw EnumerationBudgetError(required, budget);

    GrowthAccumulator acc;
    std::vector<int> x_prev, y_seen;
    x_prev.reserve(std::size_t(n));
    y_seen.reserve(std::size_t(n));
    growth_walk(strategy, spec, odds, n, 0, 0, 1.0, x_prev, y_seen, acc);

    GrowthReport r;
    r.horizon = n;
    r.w_bits = acc.w;
    r.growth_rate = acc.w / n;
    if (acc.full_investment) {
        r.e_log_odds = acc.e_log_odds;
        r.h_causal = causal_entropy(joint_pmf(spec, n, budget));
    }
    return r;
}

GrowthReport growth_monte_carlo(const BettingStrategy& strategy, const ProcessSpec& spec,
                                const OddsModel& odds, int n, long trials, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    if (trials < 2) throw std::invalid_argument("need at least two trials");
    if (odds.horses() != spec.mx()) throw std::invalid_argument("odds must cover the x alphabet");
    std::mt19937_64 master(seed);
    double sum = 0.0, sumsq = 0.0;
    for (long trial = 0; trial < trials; ++trial) {
        const SamplePath path = sample_path(spec, n, 0, master());
        double log_s = 0.0;
        for (int t = 0; t < n; ++t) {
            const std::span<const int> xp(path.x.data(), std::size_t(t));
            const std::span<const int> ys(path.y.data(), std::size_t(t) + 1);
            const Allocation a = strategy.allocate(xp, ys);
            const double o = odds.at(t, xp)[std::size_t(path.x[std::size_t(t)])];
            log_s += std::log2(a.cash + a.bets[std::size_t(path.x[std::size_t(t)])] * o);
        }
        sum += log_s;
        sumsq += log_s * log_s;
    }
    const double mean = sum / double(trials);
    const double var = std::max(0.0, (sumsq - sum * sum / double(trials)) / double(trials - 1));
    GrowthReport r;
    r.horizon = n;
    r.w_bits = mean;
    r.growth_rate = mean / n;
    r.mc_estimate = mean;
    r.mc_stderr = std::sqrt(var / double(trials));
    return r;
}

StrategyTable optimal_full_strategy(const ProcessSpec& spec, int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const std::size_t B = std::size_t(spec.pair_count());
    const std::size_t required = pow_saturating(B, n);
    if (required > budget) throw EnumerationBudgetError(required, budget);

    StrategyTable table(spec.mx(), spec.my(), n, true);
    std::vector<double> reach{1.0};  // P(pair history) over full history indices
    for (int t = 0; t < n; ++t) {
        std::vector<double> next(reach.size() * B, 0.0);
        for (std::size_t h = 0; h < reach.size(); ++h) {
            const std::uint64_t reduced = spec.reduce_history(t, h);
            for (int y = 0; y < spec.my(); ++y) {
                Allocation row = uniform_allocation(spec.mx());
                if (reach[h] > 0.0) {
                    std::vector<double> cond(std::size_t(spec.mx()));
                    if (spec.conditional_x(t, reduced, y, cond)) row = Allocation{0.0, cond};
                }
                table.set_row(t, std::uint64_t(h) * std::uint64_t(spec.my()) + std::uint64_t(y),
                              std::move(row));
            }
            const std::span<const double> krow = spec.step_row(t, reduced);
            for (std::size_t s = 0; s < B; ++s) next[h * B + s] = reach[h] * krow[s];
        }
        reach = std::move(next);
    }
    return table;
}

StrategyTable optimal_blind_strategy(const ProcessSpec& spec, int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const JointTable joint = joint_pmf(spec, n, budget);
    const int mx = spec.mx();
    // Marginal x-prefix tables, folded down from level n.
    std::vector<std::vector<double>> levels(std::size_t(n) + 1);
    levels[std::size_t(n)] = joint.x_marginal(n);
    for (int i = n; i >= 1; --i) {
        levels[std::size_t(i) - 1].assign(levels[std::size_t(i)].size() / std::size_t(mx), 0.0);
        for (std::size_t c = 0; c < levels[std::size_t(i)].size(); ++c)
            levels[std::size_t(i) - 1][c / std::size_t(mx)] += levels[std::size_t(i)][c];
    }
    StrategyTable table(mx, spec.my(), n, false);
    for (int t = 0; t < n; ++t) {
        const auto& parent = levels[std::size_t(t)];
        const auto& child = levels[std::size_t(t) + 1];
        for (std::size_t h = 0; h < parent.size(); ++h) {
            Allocation row = uniform_allocation(mx);
            if (parent[h] > 0.0) {
                for (int x = 0; x < mx; ++x)
                    row.bets[std::size_t(x)] = child[h * std::size_t(mx) + std::size_t(x)] / parent[h];
            }
            table.set_row(t, h, std::move(row));
        }
    }
    return table;
}

StrategyTable optimal_partial_strategy(const ProcessSpec& spec, const OddsModel& odds, int n,
                                       std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    if (odds.horses() != spec.mx()) throw std::invalid_argument("odds must cover the x alphabet");
    const std::size_t B = std::size_t(spec.pair_count());
    const std::size_t required = pow_saturating(B, n);
    if (required > budget) throw EnumerationBudgetError(required, budget);

    StrategyTable table(spec.mx(), spec.my(), n, true);
    std::vector<double> reach{1.0};
    for (int t = 0; t < n; ++t) {
        std::vector<double> next(reach.size() * B, 0.0);
        for (std::size_t h = 0; h < reach.size(); ++h) {
            const std::uint64_t reduced = spec.reduce_history(t, h);
            const std::vector<int> xs = decode_x_digits(h, t, spec.my(), int(B));
            const std::span<const double> odds_row = odds.at(t, xs);
            for (int y = 0; y < spec.my(); ++y) {
                Allocation row = uniform_allocation(spec.mx());
                if (reach[h] > 0.0) {
                    std::vector<double> cond(std::size_t(spec.mx()));
                    if (spec.conditional_x(t, reduced, y, cond)) {
                        PartialBet pb = kelly_partial_bet(cond, odds_row);
                        row = Allocation{pb.cash, std::move(pb.bets)};
                    }
                }
                table.set_row(t, std::uint64_t(h) * std::uint64_t(spec.my()) + std::uint64_t(y),
                              std::move(row));
            }
            const std::span<const double> krow = spec.step_row(t, reduced);
            for (std::size_t s = 0; s < B; ++s) next[h * B + s] = reach[h] * krow[s];
        }
        reach = std::move(next);
    }
    return table;
}

double delta_growth(const ProcessSpec& spec, const OddsModel& odds, int n, std::size_t budget) {
    const GrowthReport with_side =
        growth_exact(optimal_full_strategy(spec, n, budget), spec, odds, n, budget);
    const GrowthReport blind =
        growth_exact(optimal_blind_strategy(spec, n, budget), spec, odds, n, budget);
    const double delta = (with_side.w_bits - blind.w_bits) / n;
    const InfoReport info = directed_information(joint_pmf(spec, n, budget));
    if (std::abs(delta - info.directed_info / n) > 1e-9)
        throw InternalInconsistencyError(
            "growth gap " + std::to_string(delta) + " disagrees with directed information rate " +
            std::to_string(info.directed_info / n));
    return delta;
}

WealthTrajectory wealth_trajectory(const BettingStrategy& strategy, const OddsModel& odds,
                                   std::span<const int> x, std::span<const int> y) {
    if (y.size() < x.size()) throw std::invalid_argument("need side signal for every race");
    WealthTrajectory w;
    w.per_race_factor.reserve(x.size());
    w.cumulative_log2.reserve(x.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const std::span<const int> xp(x.data(), t);
        const std::span<const int> ys(y.data(), t + 1);
        const Allocation a = strategy.allocate(xp, ys);
        const double o = odds.at(int(t), xp)[std::size_t(x[t])];
        const double factor = a.cash + a.bets[std::size_t(x[t])] * o;
        cum += std::log2(factor);
        w.per_race_factor.push_back(factor);
        w.cumulative_log2.push_back(cum);
    }
    return w;
}

}  // namespace causalbet
