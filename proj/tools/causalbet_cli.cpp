// Command line front end: computes directed information, optimal gambling
// growth, the Markov example sweeps, causal compression rates, and log-optimal
// portfolio growth for processes described by JSON configs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalbet/causal_info.hpp"
#include "causalbet/coding.hpp"
#include "causalbet/config.hpp"
#include "causalbet/csv.hpp"
#include "causalbet/errors.hpp"
#include "causalbet/gambling.hpp"
#include "causalbet/markov_example.hpp"
#include "causalbet/portfolio.hpp"
#include "causalbet/process.hpp"

namespace {

using namespace causalbet;

struct CommonOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int n = 0;
    int k = 0;
    long trials = 0;
    std::size_t budget = kDefaultEnumerationBudget;
    bool seed_set = false, n_set = false, k_set = false, trials_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "Preset name or JSON config path")->required();
    cmd->add_option("--out", o.out, "Output CSV path (default: stdout)");
    cmd->add_option("--seed", o.seed, "Random seed override");
    cmd->add_option("--n", o.n, "Horizon override");
    cmd->add_option("--k", o.k, "Lookahead override");
    cmd->add_option("--trials", o.trials, "Monte Carlo trial count override");
    cmd->add_option("--budget", o.budget, "Enumeration budget in table entries");
}

ExperimentConfig resolve(const CLI::App* cmd, CommonOpts& o) {
    ExperimentConfig cfg = load_config(o.config);
    if (cmd->count("--seed")) cfg.seed = o.seed;
    if (cmd->count("--n")) cfg.n = o.n;
    if (cmd->count("--k")) cfg.k = o.k;
    if (cmd->count("--trials")) cfg.trials = o.trials;
    if (cfg.n < 1) throw ConfigError("n", "must be >= 1");
    if (cfg.k < 0) throw ConfigError("k", "must be >= 0");
    if (cfg.trials < 2) throw ConfigError("trials", "must be >= 2");
    return cfg;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << content;
}

const ProcessSpec& need_process(const ExperimentConfig& cfg) {
    if (!cfg.process) throw ConfigError("process", "required by this command");
    return *cfg.process;
}

const OddsModel& need_odds(const ExperimentConfig& cfg) {
    if (!cfg.odds) throw ConfigError("odds", "required by this command");
    return *cfg.odds;
}

std::string run_dinfo(const ExperimentConfig& cfg, std::size_t budget) {
    const ProcessSpec& spec = need_process(cfg);
    std::string out = InfoReport::csv_header() + ",directed_per_n,k,directed_lookahead\n";
    for (int n = 1; n <= cfg.n; ++n) {
        const InfoReport rep = directed_information(joint_pmf(spec, n, budget));
        const double lookahead =
            directed_information_lookahead(joint_pmf(spec, n + cfg.k, budget), n, cfg.k);
        out += rep.csv_row() + ',' + format_sig(rep.directed_info / n) + ',' +
               std::to_string(cfg.k) + ',' + format_sig(lookahead) + '\n';
    }
    return out;
}

std::string run_growth(const ExperimentConfig& cfg, std::size_t budget) {
    const ProcessSpec& spec = need_process(cfg);
    const OddsModel& odds = need_odds(cfg);
    const int n = cfg.n;
    const StrategyTable full = optimal_full_strategy(spec, n, budget);
    const GrowthReport rep_full = growth_exact(full, spec, odds, n, budget);
    const StrategyTable partial = optimal_partial_strategy(spec, odds, n, budget);
    const GrowthReport rep_partial = growth_exact(partial, spec, odds, n, budget);
    const GrowthReport mc = growth_monte_carlo(partial, spec, odds, n, cfg.trials, cfg.seed);
    const double dw = delta_growth(spec, odds, n, budget);
    std::string out =
        "n,w_full,rate_full,e_log_odds,h_causal,w_partial,rate_partial,mc_estimate,mc_stderr,"
        "delta_w\n";
    out += std::to_string(n) + ',' + format_sig(rep_full.w_bits) + ',' +
           format_sig(rep_full.growth_rate) + ',' + format_sig(rep_full.e_log_odds.value()) + ',' +
           format_sig(rep_full.h_causal.value()) + ',' + format_sig(rep_partial.w_bits) + ',' +
           format_sig(rep_partial.growth_rate) + ',' + format_sig(mc.mc_estimate.value()) + ',' +
           format_sig(mc.mc_stderr.value()) + ',' + format_sig(dw) + '\n';
    return out;
}

std::string run_fig2(const ExperimentConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep", "required by the fig2 command");
    const SweepConfig& s = *cfg.sweep;
    std::string out = "param,value,delta_w\n";
    if (s.param == "q") {
        std::vector<double> grid;
        for (double q = s.from; q <= s.to + s.step * 0.5; q += s.step) grid.push_back(q);
        for (const SweepRow& row : sweep_q(s.p, grid))
            out += "q," + format_sig(row.value) + ',' + format_sig(row.delta_w) + '\n';
    } else {
        std::vector<int> grid;
        for (int k = int(s.from); k <= int(s.to); ++k) grid.push_back(k);
        for (const SweepRow& row : sweep_lookahead(s.p, s.q, grid))
            out += "k," + format_sig(row.value) + ',' + format_sig(row.delta_w) + '\n';
    }
    return out;
}

std::string run_compress(const ExperimentConfig& cfg, std::size_t budget) {
    const ProcessSpec& spec = need_process(cfg);
    const int n = cfg.n;
    const CodeLengthProfile with_side = shannon_lengths(spec, n, true, budget);
    const CodeLengthProfile no_side = shannon_lengths(spec, n, false, budget);
    const double rate_with = expected_rate(with_side, spec, budget);
    const double rate_no = expected_rate(no_side, spec, budget);
    const InfoReport info = directed_information(joint_pmf(spec, n, budget));
    std::string out = "n,rate_no_side_info,rate_with_side_info,savings,directed_info_per_symbol\n";
    out += std::to_string(n) + ',' + format_sig(rate_no) + ',' + format_sig(rate_with) + ',' +
           format_sig(rate_no - rate_with) + ',' + format_sig(info.directed_info / n) + '\n';
    return out;
}

std::string run_portfolio(const ExperimentConfig& cfg, std::size_t budget) {
    const ProcessSpec& spec = need_process(cfg);
    const int n = cfg.n;
    bool embedded = false;
    std::string w_gambling_cell, gap_cell;
    const MarketSpec market = [&]() -> MarketSpec {
        if (cfg.market) return MarketSpec(spec, cfg.market->support);
        embedded = true;
        return horse_race_embedding(spec, need_odds(cfg));
    }();
    const OptimalCausalPortfolio strategy(market);
    const GrowthReport rep = causal_portfolio_growth(strategy, market, n, budget);
    if (embedded) {
        const GrowthReport gam = growth_exact(optimal_partial_strategy(spec, *cfg.odds, n, budget),
                                              spec, *cfg.odds, n, budget);
        w_gambling_cell = format_sig(gam.w_bits);
        gap_cell = format_sig(std::abs(gam.w_bits - rep.w_bits));
    }
    std::string out = "n,w_portfolio,rate_portfolio,w_gambling,gap\n";
    out += std::to_string(n) + ',' + format_sig(rep.w_bits) + ',' + format_sig(rep.growth_rate) +
           ',' + w_gambling_cell + ',' + gap_cell + '\n';
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gambling, portfolio, and compression value of causal side information"};
    app.require_subcommand(1);

    CommonOpts dinfo_o, growth_o, fig2_o, compress_o, portfolio_o;
    CLI::App* dinfo = app.add_subcommand("dinfo", "Directed information table for n = 1..N");
    add_common(dinfo, dinfo_o);
    CLI::App* growth = app.add_subcommand("growth", "Optimal gambling growth, exact and Monte Carlo");
    add_common(growth, growth_o);
    CLI::App* fig2 = app.add_subcommand("fig2", "Markov example sweeps over q or lookahead k");
    add_common(fig2, fig2_o);
    CLI::App* compress = app.add_subcommand("compress", "Causal compression rates");
    add_common(compress, compress_o);
    CLI::App* portfolio = app.add_subcommand("portfolio", "Log-optimal causal portfolio growth");
    add_common(portfolio, portfolio_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dinfo->parsed()) {
            const ExperimentConfig cfg = resolve(dinfo, dinfo_o);
            emit(dinfo_o.out, run_dinfo(cfg, dinfo_o.budget));
        } else if (growth->parsed()) {
            const ExperimentConfig cfg = resolve(growth, growth_o);
            emit(growth_o.out, run_growth(cfg, growth_o.budget));
        } else if (fig2->parsed()) {
            const ExperimentConfig cfg = resolve(fig2, fig2_o);
            emit(fig2_o.out, run_fig2(cfg));
        } else if (compress->parsed()) {
            const ExperimentConfig cfg = resolve(compress, compress_o);
            emit(compress_o.out, run_compress(cfg, compress_o.budget));
        } else if (portfolio->parsed()) {
            const ExperimentConfig cfg = resolve(portfolio, portfolio_o);
            emit(portfolio_o.out, run_portfolio(cfg, portfolio_o.budget));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
