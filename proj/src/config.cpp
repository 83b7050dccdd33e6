#include "rslab/config.hpp"

#include <fstream>
#include <stdexcept>

namespace rslab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

window parse_window(const std::string& value) {
    auto comma = value.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("config: window needs 'lo,hi': " + value);
    window w{std::stod(trim(value.substr(0, comma))), std::stod(trim(value.substr(comma + 1)))};
    if (w.lo > w.hi) throw std::invalid_argument("config: window lo > hi: " + value);
    return w;
}

}  // namespace

run_config run_config::defaults() {
    run_config cfg;
    // Frozen acceptance baselines.  Theory-pinned thresholds keep their
    // stated values; empirical windows were frozen from the first full
    // computation at table_limit 1e6 (config/acceptance.conf mirrors these).
    cfg.windows = {
        {"c_rel_agreement", {0.0, 1e-3}},
        {"delta_expansion_rms_slope", {-1.0, -0.15}},
        {"delta_expansion_sup_const", {0.0, 0.10}},
        {"delta1_expansion_norm_max", {0.0, 0.12}},
        {"mean_square_ratio", {3.90, 4.30}},
        {"delta_m4_slope", {0.0, 3.1}},
        {"delta1_m4_slope", {5.3, 5.7}},
        {"largevalues_ratio_max", {0.0, 1.0}},
        {"quadruples_ratio_max", {0.0, 8.0}},
        {"quadruples_anomalies", {0.0, 1000.0}},
        {"osc_decay_factor", {5.0, 1e15}},
        {"d4_m2_slope", {0.0, 1.85}},
        {"d4_m4_slope", {0.0, 2.85}},
        {"d4_a3", {0.13333, 0.20}},
        {"window_average_ratio_max", {0.0, 0.5}},
    };
    return cfg;
}

const window& run_config::window_for(const std::string& name) const {
    auto it = windows.find(name);
    if (it == windows.end())
        throw std::invalid_argument("config: no acceptance window named " + name);
    return it->second;
}

void run_config::validate() const {
    if (table_limit < 1) throw std::invalid_argument("config: table_limit must be >= 1");
    for (const auto& [name, w] : windows)
        if (w.lo > w.hi) throw std::invalid_argument("config: window " + name + " has lo > hi");
}

void apply_override(run_config& cfg, const std::string& key, const std::string& value) {
    if (key == "table_limit") {
        cfg.table_limit = std::stoull(value);
    } else if (key == "cache_dir") {
        cfg.cache_dir = value;
    } else if (key == "thread_count") {
        cfg.thread_count = std::stoi(value);
    } else if (key == "output_format") {
        if (value != "csv" && value != "json")
            throw std::invalid_argument("config: output_format must be csv or json");
        cfg.output_format = value;
    } else if (key.rfind("window.", 0) == 0) {
        cfg.windows[key.substr(7)] = parse_window(value);
    } else {
        throw std::invalid_argument("config: unknown key " + key);
    }
}

run_config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    run_config cfg = run_config::defaults();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: missing '=' at line " +
                                        std::to_string(line_no));
        apply_override(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

}  // namespace rslab
