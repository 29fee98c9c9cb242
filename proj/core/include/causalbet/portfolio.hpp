#pragma once

#include <span>
#include <vector>

#include "causalbet/gambling.hpp"
#include "causalbet/process.hpp"

namespace causalbet {

// One market outcome: probability and the vector of price relatives
// (end-of-period value per unit invested in each stock).
struct PricePoint {
    double prob = 0.0;
    std::vector<double> relatives;
};

struct Portfolio {
    std::vector<double> weights;  // nonnegative, sums to 1
};

struct PortfolioSolveOptions {
    double tol = 1e-10;       // first-order residual target
    long max_iters = 1000000;
};

// Kuhn-Tucker residual of b for max E[log(b . X)]: how far the expected
// return ratios E[X_j / (b . X)] sit from 1 on the support (and above 1 off
// it).
double portfolio_kkt_residual(const Portfolio& b, std::span<const PricePoint> dist);

double expected_log_growth(const Portfolio& b, std::span<const PricePoint> dist);  // bits

// Log-optimal portfolio via the multiplicative update b_j <- b_j E[X_j/(b.X)].
// Throws InfeasibleDistributionError when some outcome with positive
// probability pays nothing on every stock, NonConvergenceError past the
// iteration cap.
Portfolio log_optimal_portfolio(std::span<const PricePoint> dist,
                                PortfolioSolveOptions options = {});

// Stock market driven by the pair process: outcome x_t picks a column of
// price relatives; the side signal y_t arrives before the allocation.
class MarketSpec {
public:
    MarketSpec(ProcessSpec process, std::vector<std::vector<double>> outcome_relatives);

    const ProcessSpec& process() const noexcept { return process_; }
    int stocks() const noexcept { return stocks_; }
    std::span<const double> relatives(int outcome) const;

private:
    ProcessSpec process_;
    std::vector<std::vector<double>> outcome_relatives_;
    int stocks_;
};

// The horse race as a market: m+1 stocks where stock x pays o(x) on outcome x
// and nothing otherwise, plus a cash stock paying 1 always. Constant odds
// only.
MarketSpec horse_race_embedding(const ProcessSpec& spec, const OddsModel& odds);

class PortfolioStrategy {
public:
    virtual ~PortfolioStrategy() = default;
    virtual Portfolio choose(std::span<const int> x_prev, std::span<const int> y_seen) const = 0;
};

// Solves the per-history log-optimal problem on demand from the conditional
// outcome law; falls back to uniform weights on probability-zero histories.
class OptimalCausalPortfolio : public PortfolioStrategy {
public:
    explicit OptimalCausalPortfolio(MarketSpec market, PortfolioSolveOptions options = {});
    Portfolio choose(std::span<const int> x_prev, std::span<const int> y_seen) const override;

private:
    MarketSpec market_;
    PortfolioSolveOptions options_;
};

// Dense per-history portfolio table, side-blind variant included.
class PortfolioTable : public PortfolioStrategy {
public:
    PortfolioTable(int mx, int my, int horizon, bool uses_side_info, int stocks);
    void set_row(int t, std::uint64_t hist, Portfolio row);
    Portfolio choose(std::span<const int> x_prev, std::span<const int> y_seen) const override;
    bool uses_side_info() const noexcept { return uses_side_info_; }

private:
    int mx_;
    int my_;
    int horizon_;
    bool uses_side_info_;
    int stocks_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<char>> defined_;
};

// Log-optimal causal portfolio ignoring the side signal, materialized from
// the x-marginal conditionals.
PortfolioTable optimal_blind_portfolio(const MarketSpec& market, int n,
                                       std::size_t budget = kDefaultEnumerationBudget,
                                       PortfolioSolveOptions options = {});

// Exact E[log2 wealth] of the strategy on the market over n periods.
GrowthReport causal_portfolio_growth(const PortfolioStrategy& strategy, const MarketSpec& market,
                                     int n, std::size_t budget = kDefaultEnumerationBudget);

}  // namespace causalbet
