#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace rslab {

struct window {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

// Flat key=value run configuration.  Acceptance windows are named intervals
// `window.<name> = lo,hi`; frozen baselines live in the checked-in config
// file rather than in code so they can be revised through review.
struct run_config {
    std::uint64_t table_limit = 1'000'000;
    std::string cache_dir = "cache";
    int thread_count = 0;  // 0 = auto; RSLAB_THREADS env overrides
    std::string output_format = "csv";
    std::map<std::string, window> windows;

    static run_config defaults();

    const window& window_for(const std::string& name) const;
    void validate() const;
};

run_config load_config(const std::filesystem::path& path);

// Applies `key=value` overrides on top of an existing config.
void apply_override(run_config& cfg, const std::string& key, const std::string& value);

}  // namespace rslab
