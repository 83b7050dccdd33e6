#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rslab/config.hpp"
#include "rslab/coefficients.hpp"
#include "rslab/d4.hpp"
#include "rslab/error_term.hpp"
#include "rslab/moments.hpp"

namespace rslab {

struct check_result {
    std::string name;
    double value = 0.0;
    window win;
    bool pass = false;
};

struct suite_result {
    std::string suite;
    std::vector<check_result> checks;
    bool pass = true;

    void add(check_result c) {
        pass = pass && c.pass;
        checks.push_back(std::move(c));
    }
};

// Lazily built shared artifacts for a verification run.  When use_cache is
// set, tables are loaded from / saved to cache_dir; otherwise they are
// rebuilt with the configured worker count.
class verify_context {
public:
    explicit verify_context(run_config cfg, bool use_cache = true)
        : cfg_(std::move(cfg)), use_cache_(use_cache) {}

    const run_config& config() const { return cfg_; }
    int threads() const { return cfg_.thread_count; }

    std::shared_ptr<const coefficient_table> coefficients();
    const error_term_model& model();
    const series_constant& B();
    d4_table& d4();

    const moment_report& delta_m4_report();
    const moment_report& delta1_m4_report();
    const moment_report& delta1_m2_report();

    // Dyadic ladder for the slope fits: six octaves ending at the largest
    // power of two inside the table (2^14 .. 2^19 at the default limit).
    static std::vector<double> slope_ladder(std::uint64_t limit);
    std::vector<double> slope_ladder() const { return slope_ladder(cfg_.table_limit); }

private:
    run_config cfg_;
    bool use_cache_;
    std::shared_ptr<const coefficient_table> table_;
    std::optional<error_term_model> model_;
    std::optional<series_constant> b_;
    std::optional<d4_table> d4_;
    std::optional<moment_report> delta_m4_, delta1_m4_, delta1_m2_;
};

// CLI-facing suites.
suite_result run_voronoi_suite(verify_context& ctx);
suite_result run_moments_suite(verify_context& ctx);
suite_result run_largevalues_suite(verify_context& ctx);
suite_result run_quadruples_suite(verify_context& ctx);
suite_result run_d4_suite(verify_context& ctx);
suite_result run_suite(verify_context& ctx, const std::string& name);  // incl. "all"

std::vector<std::string> suite_names();

}  // namespace rslab
