#include "causalbet/portfolio.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

constexpr double kVanishWeight = 1e-12;

std::size_t pow_saturating(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

void check_dist(std::span<const PricePoint> dist) {
    if (dist.empty()) throw std::invalid_argument("portfolio: empty outcome distribution");
    const std::size_t m = dist[0].relatives.size();
    if (m == 0) throw std::invalid_argument("portfolio: need at least one stock");
    double psum = 0.0;
    for (const auto& pt : dist) {
        if (!(pt.prob >= 0.0)) throw std::invalid_argument("portfolio: negative probability");
        psum += pt.prob;
        if (pt.relatives.size() != m)
            throw std::invalid_argument("portfolio: ragged price relative vectors");
        bool any_positive = false;
        for (double x : pt.relatives) {
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("portfolio: price relatives must be finite and >= 0");
            any_positive |= x > 0.0;
        }
        if (pt.prob > 0.0 && !any_positive)
            throw InfeasibleDistributionError(
                "an outcome with positive probability pays nothing on every stock");
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("portfolio: outcome probabilities must sum to 1");
}

std::vector<double> return_ratios(std::span<const double> b, std::span<const PricePoint> dist) {
    std::vector<double> r(b.size(), 0.0);
    for (const auto& pt : dist) {
        if (pt.prob <= 0.0) continue;
        double bx = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) bx += b[j] * pt.relatives[j];
        if (bx <= 0.0) {
            for (double& v : r) v = std::numeric_limits<double>::infinity();
            return r;
        }
        for (std::size_t j = 0; j < b.size(); ++j) r[j] += pt.prob * pt.relatives[j] / bx;
    }
    return r;
}

double residual_from_ratios(std::span<const double> b, std::span<const double> r) {
    double res = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        const double excess = b[j] > kVanishWeight ? std::abs(r[j] - 1.0) : std::max(0.0, r[j] - 1.0);
        res = std::max(res, excess);
    }
    return res;
}

Portfolio uniform_portfolio(int stocks) {
    return Portfolio{std::vector<double>(std::size_t(stocks), 1.0 / stocks)};
}

}  // namespace

double portfolio_kkt_residual(const Portfolio& b, std::span<const PricePoint> dist) {
    check_dist(dist);
    if (b.weights.size() != dist[0].relatives.size())
        throw std::invalid_argument("portfolio: weight count must match stock count");
    const std::vector<double> r = return_ratios(b.weights, dist);
    return residual_from_ratios(b.weights, r);
}

double expected_log_growth(const Portfolio& b, std::span<const PricePoint> dist) {
    check_dist(dist);
    if (b.weights.size() != dist[0].relatives.size())
        throw std::invalid_argument("portfolio: weight count must match stock count");
    double w = 0.0;
    for (const auto& pt : dist) {
        if (pt.prob <= 0.0) continue;
        double bx = 0.0;
        for (std::size_t j = 0; j < b.weights.size(); ++j) bx += b.weights[j] * pt.relatives[j];
        w += pt.prob * std::log2(bx);
    }
    return w;
}

Portfolio log_optimal_portfolio(std::span<const PricePoint> dist, PortfolioSolveOptions options) {
    check_dist(dist);
    const std::size_t m = dist[0].relatives.size();
    std::vector<double> b(m, 1.0 / double(m));

    double residual = std::numeric_limits<double>::infinity();
    for (long iter = 0; iter < options.max_iters; ++iter) {
        const std::vector<double> r = return_ratios(b, dist);
        residual = residual_from_ratios(b, r);
        if (residual <= options.tol) break;
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            b[j] *= r[j];
            sum += b[j];
        }
        if (!(sum > 0.0)) throw InternalInconsistencyError("portfolio update collapsed to zero");
        for (double& v : b) v /= sum;
    }
    if (residual > options.tol)
        throw NonConvergenceError("portfolio solver hit the iteration cap", residual);

    double sum = 0.0;
    for (double& v : b) {
        if (v < kVanishWeight) v = 0.0;
        sum += v;
    }
    for (double& v : b) v /= sum;
    return Portfolio{std::move(b)};
}

MarketSpec::MarketSpec(ProcessSpec process, std::vector<std::vector<double>> outcome_relatives)
    : process_(std::move(process)), outcome_relatives_(std::move(outcome_relatives)), stocks_(0) {
    if (int(outcome_relatives_.size()) != process_.mx())
        throw std::invalid_argument("market: need one price relative vector per outcome");
    stocks_ = int(outcome_relatives_[0].size());
    if (stocks_ < 1) throw std::invalid_argument("market: need at least one stock");
    for (const auto& row : outcome_relatives_) {
        if (int(row.size()) != stocks_)
            throw std::invalid_argument("market: ragged price relative vectors");
        for (double x : row)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("market: price relatives must be finite and >= 0");
    }
}

std::span<const double> MarketSpec::relatives(int outcome) const {
    if (outcome < 0 || outcome >= int(outcome_relatives_.size()))
        throw std::invalid_argument("market: outcome out of range");
    return outcome_relatives_[std::size_t(outcome)];
}

MarketSpec horse_race_embedding(const ProcessSpec& spec, const OddsModel& odds) {
    if (!odds.is_constant())
        throw std::invalid_argument("horse race embedding supports constant odds only");
    if (odds.horses() != spec.mx())
        throw std::invalid_argument("horse race embedding: odds must cover the x alphabet");
    const std::span<const double> o = odds.at(0, {});
    const int m = spec.mx();
    std::vector<std::vector<double>> rel(std::size_t(m), std::vector<double>(std::size_t(m) + 1, 0.0));
    for (int x = 0; x < m; ++x) {
        rel[std::size_t(x)][std::size_t(x)] = o[std::size_t(x)];
        rel[std::size_t(x)][std::size_t(m)] = 1.0;  // cash stock
    }
    return MarketSpec(spec, std::move(rel));
}

OptimalCausalPortfolio::OptimalCausalPortfolio(MarketSpec market, PortfolioSolveOptions options)
    : market_(std::move(market)), options_(options) {}

Portfolio OptimalCausalPortfolio::choose(std::span<const int> x_prev,
                                         std::span<const int> y_seen) const {
    const ProcessSpec& spec = market_.process();
    const int t = int(x_prev.size());
    if (y_seen.size() != x_prev.size() + 1)
        throw std::invalid_argument("choose: need y_seen one longer than x_prev");
    std::uint64_t hist = 0;
    for (int j = 0; j < t; ++j)
        hist = spec.push_history(
            j, hist, pair_digit(x_prev[std::size_t(j)], y_seen[std::size_t(j)], spec.my()));
    std::vector<double> cond(std::size_t(spec.mx()), 0.0);
    if (!spec.conditional_x(t, hist, y_seen[std::size_t(t)], cond))
        return uniform_portfolio(market_.stocks());
    std::vector<PricePoint> dist;
    dist.reserve(cond.size());
    for (int x = 0; x < spec.mx(); ++x) {
        const std::span<const double> rel = market_.relatives(x);
        dist.push_back({cond[std::size_t(x)], std::vector<double>(rel.begin(), rel.end())});
    }
    return log_optimal_portfolio(dist, options_);
}

PortfolioTable::PortfolioTable(int mx, int my, int horizon, bool uses_side_info, int stocks)
    : mx_(mx), my_(my), horizon_(horizon), uses_side_info_(uses_side_info), stocks_(stocks) {
    if (mx < 1 || my < 1 || horizon < 1 || stocks < 1)
        throw std::invalid_argument("portfolio table shape");
    rows_.resize(std::size_t(horizon));
    defined_.resize(std::size_t(horizon));
    for (int t = 0; t < horizon; ++t) {
        const std::size_t histories =
            uses_side_info ? pow_saturating(std::size_t(mx) * my, t) * std::size_t(my)
                           : pow_saturating(std::size_t(mx), t);
        rows_[std::size_t(t)].assign(histories * std::size_t(stocks), 0.0);
        defined_[std::size_t(t)].assign(histories, 0);
    }
}

void PortfolioTable::set_row(int t, std::uint64_t hist, Portfolio row) {
    if (t < 0 || t >= horizon_) throw std::invalid_argument("portfolio row step out of range");
    auto& d = defined_[std::size_t(t)];
    if (hist >= d.size()) throw std::invalid_argument("portfolio row history out of range");
    if (int(row.weights.size()) != stocks_)
        throw std::invalid_argument("portfolio row needs one weight per stock");
    double sum = 0.0;
    for (double w : row.weights) {
        if (w < -1e-12) throw std::invalid_argument("portfolio row: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("portfolio row: weights must sum to 1");
    double* dst = rows_[std::size_t(t)].data() + std::size_t(hist) * std::size_t(stocks_);
    for (int j = 0; j < stocks_; ++j) dst[j] = row.weights[std::size_t(j)];
    d[std::size_t(hist)] = 1;
}

Portfolio PortfolioTable::choose(std::span<const int> x_prev, std::span<const int> y_seen) const {
    const int t = int(x_prev.size());
    if (t >= horizon_)
        throw StrategyUndefinedError("portfolio table has no step " + std::to_string(t));
    std::uint64_t hist = 0;
    if (uses_side_info_) {
        if (y_seen.size() != x_prev.size() + 1)
            throw std::invalid_argument("choose: need y_seen one longer than x_prev");
        for (int j = 0; j < t; ++j)
            hist = hist * std::uint64_t(mx_ * my_) +
                   std::uint64_t(pair_digit(x_prev[std::size_t(j)], y_seen[std::size_t(j)], my_));
        hist = hist * std::uint64_t(my_) + std::uint64_t(y_seen[std::size_t(t)]);
    } else {
        for (int x : x_prev) hist = hist * std::uint64_t(mx_) + std::uint64_t(x);
    }
    if (!defined_[std::size_t(t)][std::size_t(hist)])
        throw StrategyUndefinedError("portfolio table has no row for step " + std::to_string(t) +
                                     ", history " + std::to_string(hist));
    const double* src = rows_[std::size_t(t)].data() + std::size_t(hist) * std::size_t(stocks_);
    Portfolio p;
    p.weights.assign(src, src + stocks_);
    return p;
}

PortfolioTable optimal_blind_portfolio(const MarketSpec& market, int n, std::size_t budget,
                                       PortfolioSolveOptions options) {
    const ProcessSpec& spec = market.process();
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const JointTable joint = joint_pmf(spec, n, budget);
    const int mx = spec.mx();
    std::vector<std::vector<double>> levels(std::size_t(n) + 1);
    levels[std::size_t(n)] = joint.x_marginal(n);
    for (int i = n; i >= 1; --i) {
        levels[std::size_t(i) - 1].assign(levels[std::size_t(i)].size() / std::size_t(mx), 0.0);
        for (std::size_t c = 0; c < levels[std::size_t(i)].size(); ++c)
            levels[std::size_t(i) - 1][c / std::size_t(mx)] += levels[std::size_t(i)][c];
    }
    PortfolioTable table(mx, spec.my(), n, false, market.stocks());
    for (int t = 0; t < n; ++t) {
        const auto& parent = levels[std::size_t(t)];
        const auto& child = levels[std::size_t(t) + 1];
        for (std::size_t h = 0; h < parent.size(); ++h) {
            if (parent[h] <= 0.0) {
                table.set_row(t, h, uniform_portfolio(market.stocks()));
                continue;
            }
            std::vector<PricePoint> dist;
            dist.reserve(std::size_t(mx));
            for (int x = 0; x < mx; ++x) {
                const std::span<const double> rel = market.relatives(x);
                dist.push_back({child[h * std::size_t(mx) + std::size_t(x)] / parent[h],
                                std::vector<double>(rel.begin(), rel.end())});
            }
            table.set_row(t, h, log_optimal_portfolio(dist, options));
        }
    }
    return table;
}

namespace {

void portfolio_walk(const PortfolioStrategy& strategy, const MarketSpec& market, int n, int t,
                    std::uint64_t hist, double prob, std::vector<int>& x_prev,
                    std::vector<int>& y_seen, double& w) {
    if (t == n) return;
    const ProcessSpec& spec = market.process();
    const std::span<const double> row = spec.step_row(t, hist);
    const int mx = spec.mx(), my = spec.my();
    for (int y = 0; y < my; ++y) {
        double py = 0.0;
        for (int x = 0; x < mx; ++x) py += row[std::size_t(pair_digit(x, y, my))];
        if (prob * py <= 0.0) continue;
        y_seen.push_back(y);
        const Portfolio b = strategy.choose(x_prev, y_seen);
        for (int x = 0; x < mx; ++x) {
            const double p_child = prob * row[std::size_t(pair_digit(x, y, my))];
            if (p_child <= 0.0) continue;
            const std::span<const double> rel = market.relatives(x);
            double bx = 0.0;
            for (std::size_t j = 0; j < rel.size(); ++j) bx += b.weights[j] * rel[j];
            w += p_child * std::log2(bx);
            x_prev.push_back(x);
            portfolio_walk(strategy, market, n, t + 1,
                           spec.push_history(t, hist, pair_digit(x, y, my)), p_child, x_prev,
                           y_seen, w);
            x_prev.pop_back();
        }
        y_seen.pop_back();
    }
}

}  // namespace

GrowthReport causal_portfolio_growth(const PortfolioStrategy& strategy, const MarketSpec& market,
                                     int n, std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const std::size_t required = pow_saturating(std::size_t(market.process().pair_count()), n);
    if (required > budget) throw EnumerationBudgetError(required, budget);
    double w = 0.0;
    std::vector<int> x_prev, y_seen;
    x_prev.reserve(std::size_t(n));
    y_seen.reserve(std::size_t(n));
    portfolio_walk(strategy, market, n, 0, 0, 1.0, x_prev, y_seen, w);
    GrowthReport r;
    r.horizon = n;
    r.w_bits = w;
    r.growth_rate = w / n;
    return r;
}

}  // namespace causalbet
