#include "causalbet/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

using nlohmann::json;

std::string join_key(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(join_key(path, it.key()), "unknown key");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(join_key(path, key), "missing");
    if (!v->is_number()) throw ConfigError(join_key(path, key), "expected a number");
    return v->get<double>();
}

long get_integer(const json& obj, const std::string& path, const char* key, long fallback,
                 bool required = false) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) throw ConfigError(join_key(path, key), "missing");
        return fallback;
    }
    if (!v->is_number_integer()) throw ConfigError(join_key(path, key), "expected an integer");
    return v->get<long>();
}

std::vector<double> get_vector(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(path, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> get_matrix(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
    std::vector<std::vector<double>> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_vector(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

ProcessSpec parse_process(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"markov_bsc", "iid_pair", "pair_markov", "full_history"});
    if (j.size() != 1) throw ConfigError(path, "expected exactly one process kind");
    try {
        if (const json* m = find(j, "markov_bsc")) {
            const std::string sub = join_key(path, "markov_bsc");
            require_object(*m, sub);
            check_keys(*m, sub, {"p", "q"});
            return make_markov_bsc(get_number(*m, sub, "p"), get_number(*m, sub, "q"));
        }
        if (const json* m = find(j, "iid_pair")) {
            const std::string sub = join_key(path, "iid_pair");
            require_object(*m, sub);
            check_keys(*m, sub, {"joint"});
            const json* joint = find(*m, "joint");
            if (!joint) throw ConfigError(join_key(sub, "joint"), "missing");
            return make_iid_pair(get_matrix(*joint, join_key(sub, "joint")));
        }
        if (const json* m = find(j, "pair_markov")) {
            const std::string sub = join_key(path, "pair_markov");
            require_object(*m, sub);
            check_keys(*m, sub, {"x_alphabet", "y_alphabet", "initial", "rows"});
            const int mx = int(get_integer(*m, sub, "x_alphabet", 0, true));
            const int my = int(get_integer(*m, sub, "y_alphabet", 0, true));
            const json* initial = find(*m, "initial");
            const json* rows = find(*m, "rows");
            if (!initial) throw ConfigError(join_key(sub, "initial"), "missing");
            if (!rows) throw ConfigError(join_key(sub, "rows"), "missing");
            return ProcessSpec::pair_markov({mx}, {my},
                                            get_vector(*initial, join_key(sub, "initial")),
                                            get_matrix(*rows, join_key(sub, "rows")));
        }
        const json* m = find(j, "full_history");
        const std::string sub = join_key(path, "full_history");
        require_object(*m, sub);
        check_keys(*m, sub, {"x_alphabet", "y_alphabet", "steps"});
        const int mx = int(get_integer(*m, sub, "x_alphabet", 0, true));
        const int my = int(get_integer(*m, sub, "y_alphabet", 0, true));
        const json* steps = find(*m, "steps");
        if (!steps || !steps->is_array()) throw ConfigError(join_key(sub, "steps"), "expected an array");
        std::vector<std::vector<std::vector<double>>> tables;
        for (std::size_t t = 0; t < steps->size(); ++t)
            tables.push_back(
                get_matrix((*steps)[t], join_key(sub, "steps[" + std::to_string(t) + "]")));
        return ProcessSpec::full_history({mx}, {my}, std::move(tables));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

OddsModel parse_odds(const json& j, const std::string& path, int horses_hint) {
    require_object(j, path);
    check_keys(j, path, {"uniform_fair", "constant", "markov", "per_step"});
    if (j.size() != 1) throw ConfigError(path, "expected exactly one odds kind");
    try {
        if (const json* m = find(j, "uniform_fair")) {
            if (m->is_number_integer()) return OddsModel::uniform_fair(m->get<int>());
            if (m->is_boolean() && m->get<bool>()) {
                if (horses_hint < 1)
                    throw ConfigError(join_key(path, "uniform_fair"),
                                      "needs a process to infer the horse count");
                return OddsModel::uniform_fair(horses_hint);
            }
            throw ConfigError(join_key(path, "uniform_fair"), "expected true or a horse count");
        }
        if (const json* m = find(j, "constant"))
            return OddsModel::constant(get_vector(*m, join_key(path, "constant")));
        if (const json* m = find(j, "markov")) {
            const std::string sub = join_key(path, "markov");
            require_object(*m, sub);
            check_keys(*m, sub, {"first", "rows"});
            const json* first = find(*m, "first");
            const json* rows = find(*m, "rows");
            if (!first) throw ConfigError(join_key(sub, "first"), "missing");
            if (!rows) throw ConfigError(join_key(sub, "rows"), "missing");
            return OddsModel::markov(get_vector(*first, join_key(sub, "first")),
                                     get_matrix(*rows, join_key(sub, "rows")));
        }
        const json* m = find(j, "per_step");
        const std::string sub = join_key(path, "per_step");
        if (!m->is_array()) throw ConfigError(sub, "expected an array of step tables");
        std::vector<std::vector<std::vector<double>>> tables;
        for (std::size_t t = 0; t < m->size(); ++t)
            tables.push_back(get_matrix((*m)[t], sub + "[" + std::to_string(t) + "]"));
        return OddsModel::per_step(std::move(tables));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

SweepConfig parse_sweep(const json& j, const std::string& path) {
    require_object(j, path);
    const json* param = find(j, "param");
    if (!param || !param->is_string()) throw ConfigError(join_key(path, "param"), "expected \"q\" or \"k\"");
    SweepConfig s;
    s.param = param->get<std::string>();
    if (s.param == "q") {
        check_keys(j, path, {"param", "from", "to", "step", "p"});
        s.from = get_number(j, path, "from");
        s.to = get_number(j, path, "to");
        s.step = get_number(j, path, "step");
        s.p = get_number(j, path, "p");
        if (!(s.step > 0.0)) throw ConfigError(join_key(path, "step"), "must be positive");
    } else if (s.param == "k") {
        check_keys(j, path, {"param", "from", "to", "p", "q"});
        s.from = double(get_integer(j, path, "from", 0, true));
        s.to = double(get_integer(j, path, "to", 0, true));
        s.p = get_number(j, path, "p");
        s.q = get_number(j, path, "q");
        if (s.from < 0 || s.to < s.from) throw ConfigError(join_key(path, "to"), "bad k range");
    } else {
        throw ConfigError(join_key(path, "param"), "expected \"q\" or \"k\"");
    }
    return s;
}

MarketConfig parse_market(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"support"});
    const json* support = find(j, "support");
    if (!support) throw ConfigError(join_key(path, "support"), "missing");
    return MarketConfig{get_matrix(*support, join_key(path, "support"))};
}

const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> map = {
        {"markov_bsc", R"({
  "process": {"markov_bsc": {"p": 0.2, "q": 0.25}},
  "odds": {"uniform_fair": true},
  "n": 8,
  "trials": 100000,
  "seed": 20260825
})"},
        {"iid-independent", R"({
  "process": {"iid_pair": {"joint": [[0.25, 0.25], [0.25, 0.25]]}},
  "odds": {"uniform_fair": true},
  "n": 6,
  "trials": 10000,
  "seed": 7
})"},
        {"fig2-left", R"({
  "sweep": {"param": "q", "from": 0.0, "to": 0.5, "step": 0.01, "p": 0.2}
})"},
        {"fig2-right", R"({
  "sweep": {"param": "k", "from": 0, "to": 10, "p": 0.2, "q": 0.25}
})"},
    };
    return map;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    require_object(j, "<document>");
    check_keys(j, "", {"process", "odds", "market", "sweep", "n", "k", "trials", "seed"});

    ExperimentConfig cfg;
    if (const json* p = find(j, "process")) cfg.process = parse_process(*p, "process");
    if (const json* o = find(j, "odds"))
        cfg.odds = parse_odds(*o, "odds", cfg.process ? cfg.process->mx() : 0);
    if (const json* m = find(j, "market")) cfg.market = parse_market(*m, "market");
    if (const json* s = find(j, "sweep")) cfg.sweep = parse_sweep(*s, "sweep");
    cfg.n = int(get_integer(j, "", "n", cfg.n));
    if (cfg.n < 1) throw ConfigError("n", "must be >= 1");
    cfg.k = int(get_integer(j, "", "k", cfg.k));
    if (cfg.k < 0) throw ConfigError("k", "must be >= 0");
    cfg.trials = get_integer(j, "", "trials", cfg.trials);
    if (cfg.trials < 2) throw ConfigError("trials", "must be >= 2");
    const json* seed = find(j, "seed");
    if (seed) {
        if (!seed->is_number_unsigned())
            throw ConfigError("seed", "expected an unsigned integer");
        cfg.seed = seed->get<std::uint64_t>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path) {
    const auto& map = presets();
    if (auto it = map.find(name_or_path); it != map.end()) return parse_config_text(it->second);
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("config", "no preset or readable file named '" + name_or_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

bool is_preset(const std::string& name) { return presets().count(name) > 0; }

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : presets()) names.push_back(name);
    return names;
}

std::string preset_text(const std::string& name) {
    const auto& map = presets();
    auto it = map.find(name);
    if (it == map.end()) throw ConfigError("config", "no preset named '" + name + "'");
    return it->second;
}

std::string serialize_process(const ProcessSpec& spec) {
    json j;
    switch (spec.memory_order()) {
        case MemoryOrder::iid_pairs: {
            const auto& row = spec.iid_row();
            json joint = json::array();
            for (int x = 0; x < spec.mx(); ++x) {
                json r = json::array();
                for (int y = 0; y < spec.my(); ++y) r.push_back(row[std::size_t(x * spec.my() + y)]);
                joint.push_back(std::move(r));
            }
            j["iid_pair"] = {{"joint", std::move(joint)}};
            break;
        }
        case MemoryOrder::pair_markov:
            j["pair_markov"] = {{"x_alphabet", spec.mx()},
                                {"y_alphabet", spec.my()},
                                {"initial", spec.initial_row()},
                                {"rows", spec.transition_rows()}};
            break;
        case MemoryOrder::full_history:
            j["full_history"] = {{"x_alphabet", spec.mx()},
                                 {"y_alphabet", spec.my()},
                                 {"steps", spec.step_tables()}};
            break;
    }
    return j.dump(2);
}

ProcessSpec parse_process_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    return parse_process(j, "process");
}

std::string serialize_odds(const OddsModel& odds) {
    json j;
    switch (odds.kind()) {
        case OddsKind::constant:
            j["constant"] = odds.first_row();
            break;
        case OddsKind::markov:
            j["markov"] = {{"first", odds.first_row()}, {"rows", odds.markov_rows()}};
            break;
        case OddsKind::per_step:
            j["per_step"] = odds.per_step_tables();
            break;
    }
    return j.dump(2);
}

OddsModel parse_odds_text(const std::string& json_text, int horses_hint) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    return parse_odds(j, "odds", horses_hint);
}

}  // namespace causalbet
