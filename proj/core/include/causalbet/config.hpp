#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalbet/gambling.hpp"
#include "causalbet/process.hpp"

namespace causalbet {

struct SweepConfig {
    std::string param;  // "q" or "k"
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;  // q sweeps only
    double p = 0.0;
    double q = 0.0;     // k sweeps only
};

struct MarketConfig {
    // Price relative vector per x outcome; when absent the portfolio command
    // embeds the horse race given by the odds.
    std::vector<std::vector<double>> support;
};

struct ExperimentConfig {
    std::optional<ProcessSpec> process;
    std::optional<OddsModel> odds;
    std::optional<MarketConfig> market;
    std::optional<SweepConfig> sweep;
    int n = 8;
    int k = 0;
    long trials = 10000;
    std::uint64_t seed = 1;
};

// Strict JSON: unknown or ill-typed keys raise ConfigError naming the key.
ExperimentConfig parse_config_text(const std::string& json_text);

// Accepts a built-in preset name or a path to a JSON file.
ExperimentConfig load_config(const std::string& name_or_path);
bool is_preset(const std::string& name);
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

// Round-trippable JSON forms.
std::string serialize_process(const ProcessSpec& spec);
ProcessSpec parse_process_text(const std::string& json_text);
std::string serialize_odds(const OddsModel& odds);
OddsModel parse_odds_text(const std::string& json_text, int horses_hint);

}  // namespace causalbet
