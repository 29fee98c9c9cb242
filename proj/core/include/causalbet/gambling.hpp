#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalbet/process.hpp"

namespace causalbet {

enum class OddsClass { super_fair, fair, sub_fair };

enum class OddsKind { constant, markov, per_step };

// Odds o(x_t | x^{t-1}): payout per unit stake when horse x_t wins. Odds may
// depend on past winners but never on the side information.
class OddsModel {
public:
    static OddsModel uniform_fair(int horses);
    static OddsModel constant(std::vector<double> odds);
    // First race uses `first`; later races the row of the previous winner.
    static OddsModel markov(std::vector<double> first, std::vector<std::vector<double>> rows);
    // tables[t] holds one row per x-history index (mx^t rows).
    static OddsModel per_step(std::vector<std::vector<std::vector<double>>> tables);

    int horses() const noexcept { return horses_; }
    OddsKind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == OddsKind::constant; }

    std::span<const double> at(int t, std::span<const int> x_prev) const;
    OddsClass classify(int t, std::span<const int> x_prev) const;

    // Raw row access for serialization.
    const std::vector<double>& first_row() const noexcept { return first_; }
    const std::vector<std::vector<double>>& markov_rows() const noexcept { return rows_; }
    const std::vector<std::vector<std::vector<double>>>& per_step_tables() const noexcept {
        return tables_;
    }

private:
    OddsModel() = default;

    OddsKind kind_ = OddsKind::constant;
    int horses_ = 0;
    std::vector<double> first_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<std::vector<double>>> tables_;
};

struct Allocation {
    double cash = 0.0;
    std::vector<double> bets;
};

// A betting rule; when allocating for race t it sees the t past winners and
// the side signals y_1..y_{t+1} (the current one included).
class BettingStrategy {
public:
    virtual ~BettingStrategy() = default;
    virtual Allocation allocate(std::span<const int> x_prev, std::span<const int> y_seen) const = 0;
};

// Dense per-history table; rows keyed by (x^t, y^{t+1}), or by x^t alone for
// strategies that ignore the side information.
class StrategyTable : public BettingStrategy {
public:
    StrategyTable(int mx, int my, int horizon, bool uses_side_info);

    void set_row(int t, std::uint64_t hist, Allocation row);
    bool has_row(int t, std::uint64_t hist) const;
    Allocation allocate(std::span<const int> x_prev, std::span<const int> y_seen) const override;

    int mx() const noexcept { return mx_; }
    int my() const noexcept { return my_; }
    int horizon() const noexcept { return horizon_; }
    bool uses_side_info() const noexcept { return uses_side_info_; }

    std::uint64_t history_index(std::span<const int> x_prev, std::span<const int> y_seen) const;

    // One line per row: t,history,cash,b0,...,b_{mx-1}.
    std::string to_csv() const;

private:
    int mx_;
    int my_;
    int horizon_;
    bool uses_side_info_;
    // Per step: flat rows of (cash, bets...) plus a defined mask.
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<char>> defined_;
};

// b(x_t | history) = p(x_t | history): the growth-optimal full-investment
// bettor, backed directly by the process kernels so it works at any horizon.
class ProportionalStrategy : public BettingStrategy {
public:
    explicit ProportionalStrategy(ProcessSpec spec);
    Allocation allocate(std::span<const int> x_prev, std::span<const int> y_seen) const override;

private:
    ProcessSpec spec_;
};

// Kelly bettor with a cash option under the given odds; reduces to the
// proportional bettor wherever the odds are fair or super-fair.
class KellyStrategy : public BettingStrategy {
public:
    KellyStrategy(ProcessSpec spec, OddsModel odds);
    Allocation allocate(std::span<const int> x_prev, std::span<const int> y_seen) const override;

private:
    ProcessSpec spec_;
    OddsModel odds_;
};

struct PartialBet {
    double cash = 0.0;
    std::vector<double> bets;
    double growth_bits = 0.0;  // E[log2(cash + b(X) o(X))]
};

// Single-race Kelly with cash: exact water-filling solution, KKT-verified
// internally to 1e-9.
PartialBet kelly_partial_bet(std::span<const double> p, std::span<const double> odds);

struct GrowthReport {
    int horizon = 0;
    double w_bits = 0.0;      // E[log2 S_n]; -inf if the strategy can go broke
    double growth_rate = 0.0; // w_bits / horizon
    std::optional<double> e_log_odds;  // set for full-investment strategies
    std::optional<double> h_causal;    // likewise: w = e_log_odds - h_causal
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
};

GrowthReport growth_exact(const BettingStrategy& strategy, const ProcessSpec& spec,
                          const OddsModel& odds, int n,
                          std::size_t budget = kDefaultEnumerationBudget);

GrowthReport growth_monte_carlo(const BettingStrategy& strategy, const ProcessSpec& spec,
                                const OddsModel& odds, int n, long trials, std::uint64_t seed);

// Materialized optimal strategies. Histories of probability zero get uniform
// bets (and zero cash), which never affects growth.
StrategyTable optimal_full_strategy(const ProcessSpec& spec, int n,
                                    std::size_t budget = kDefaultEnumerationBudget);
StrategyTable optimal_blind_strategy(const ProcessSpec& spec, int n,
                                     std::size_t budget = kDefaultEnumerationBudget);
StrategyTable optimal_partial_strategy(const ProcessSpec& spec, const OddsModel& odds, int n,
                                       std::size_t budget = kDefaultEnumerationBudget);

// Per-race value of the side information under full investment:
// (W*_with_side - W*_without_side) / n. Cross-checked against directed
// information; disagreement beyond 1e-9 throws InternalInconsistencyError.
double delta_growth(const ProcessSpec& spec, const OddsModel& odds, int n,
                    std::size_t budget = kDefaultEnumerationBudget);

struct WealthTrajectory {
    std::vector<double> per_race_factor;
    std::vector<double> cumulative_log2;
};

WealthTrajectory wealth_trajectory(const BettingStrategy& strategy, const OddsModel& odds,
                                   std::span<const int> x, std::span<const int> y);

}  // namespace causalbet
