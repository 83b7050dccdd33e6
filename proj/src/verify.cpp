#include "rslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "rslab/cache.hpp"
#include "rslab/quadruples.hpp"
#include "rslab/voronoi.hpp"

namespace rslab {

namespace {

check_result make_check(std::string name, double value, window win) {
    bool pass = win.contains(value);
    return {std::move(name), value, win, pass};
}

// Sample grid "near x = 1e5" shared by the two truncation scans: 128
// non-integer points in (1e5, 1.1e5).
std::vector<double> voronoi_samples() {
    std::vector<double> xs(128);
    for (int i = 0; i < 128; ++i) xs[i] = 1e5 + (i + 0.5) * (1e4 / 128.0);
    return xs;
}

std::vector<std::uint64_t> voronoi_k0_grid() {
    std::vector<std::uint64_t> ks;
    for (int e = 4; e <= 14; ++e) ks.push_back(std::uint64_t{1} << e);
    return ks;
}

}  // namespace

std::vector<double> verify_context::slope_ladder(std::uint64_t limit) {
    int top = 0;
    while ((std::uint64_t{2} << top) <= limit) ++top;  // 2^top <= limit
    int lo = std::max(top - 5, 4);
    std::vector<double> xs;
    for (int e = lo; e <= top; ++e) xs.push_back(static_cast<double>(std::uint64_t{1} << e));
    return xs;
}

std::shared_ptr<const coefficient_table> verify_context::coefficients() {
    if (table_) return table_;
    namespace fs = std::filesystem;
    fs::path coeff_path =
        fs::path(cfg_.cache_dir) / ("coeffs_" + std::to_string(cfg_.table_limit) + ".rsc");
    if (use_cache_ && fs::exists(coeff_path)) {
        table_ = std::make_shared<coefficient_table>(load_coefficients(coeff_path));
        return table_;
    }
    fs::path tau_path =
        fs::path(cfg_.cache_dir) / ("tau_" + std::to_string(cfg_.table_limit) + ".rst");
    tau_table tau;
    if (use_cache_ && fs::exists(tau_path)) {
        tau = load_tau(tau_path);
    } else {
        tau = build_tau_table(cfg_.table_limit, cfg_.thread_count);
        if (use_cache_) save_tau(tau_path, tau);
    }
    auto table = std::make_shared<coefficient_table>(build_coefficient_table(tau));
    if (use_cache_) save_coefficients(coeff_path, *table);
    table_ = table;
    return table_;
}

const error_term_model& verify_context::model() {
    if (!model_) model_.emplace(build_error_term_model(coefficients(), cfg_.thread_count));
    return *model_;
}

const series_constant& verify_context::B() {
    if (!b_) b_ = series_constant_B(*coefficients());
    return *b_;
}

d4_table& verify_context::d4() {
    if (!d4_) {
        namespace fs = std::filesystem;
        fs::path path =
            fs::path(cfg_.cache_dir) / ("d4_" + std::to_string(cfg_.table_limit) + ".rsd");
        if (use_cache_ && fs::exists(path)) {
            d4_ = load_d4(path);
        } else {
            d4_ = build_d4(cfg_.table_limit);
            if (use_cache_) save_d4(path, *d4_);
        }
        fit_main_term(*d4_);
    }
    return *d4_;
}

const moment_report& verify_context::delta_m4_report() {
    if (!delta_m4_)
        delta_m4_ = build_moment_report(model(), 4, false, slope_ladder(), cfg_.thread_count);
    return *delta_m4_;
}

const moment_report& verify_context::delta1_m4_report() {
    if (!delta1_m4_)
        delta1_m4_ = build_moment_report(model(), 4, true, slope_ladder(), cfg_.thread_count);
    return *delta1_m4_;
}

const moment_report& verify_context::delta1_m2_report() {
    if (!delta1_m2_)
        delta1_m2_ = build_moment_report(model(), 2, true, slope_ladder(), cfg_.thread_count);
    return *delta1_m2_;
}

suite_result run_voronoi_suite(verify_context& ctx) {
    suite_result suite;
    suite.suite = "voronoi";
    const auto& cfg = ctx.config();
    auto xs = voronoi_samples();
    auto ks = voronoi_k0_grid();

    auto scan2 = truncation_error_scan(ctx.model(), expansion_target::delta, xs, ks,
                                       ctx.threads());
    double increases = 0;
    for (std::size_t i = 1; i < scan2.rows.size(); ++i)
        if (scan2.rows[i].rms >= scan2.rows[i - 1].rms) ++increases;
    suite.add(make_check("delta_expansion_rms_monotone", increases, {0.0, 0.0}));
    suite.add(make_check("delta_expansion_rms_slope", scan2.slope,
                         cfg.window_for("delta_expansion_rms_slope")));

    auto scan3 = truncation_error_scan(ctx.model(), expansion_target::delta1, xs, ks,
                                       ctx.threads());
    double norm_max = 0.0;
    for (const auto& row : scan3.rows) norm_max = std::max(norm_max, row.max_normalized);
    suite.add(make_check("delta1_expansion_norm_max", norm_max, cfg.window_for("delta1_expansion_norm_max")));

    // Trivial-estimate constant at K0 = x^{3/5}.
    double triv_max = 0.0;
    for (double x : {3e4, 1e5, 3e5, 9e5}) {
        auto k0 = static_cast<std::uint64_t>(std::pow(x, 0.6));
        double v = eval_truncated(voronoi_series::for_delta(k0), ctx.model().table(), x);
        triv_max = std::max(triv_max, std::fabs(v) / std::pow(x, 0.6));
    }
    suite.add(make_check("delta_expansion_sup_const", triv_max,
                         cfg.window_for("delta_expansion_sup_const")));

    // Oscillatory-weight decay at |D| X^{1/4} = 1, 10, 100.
    smooth_weight phi(1000.0);
    double x4 = std::pow(phi.X(), 0.25);
    double a0 = std::abs(oscillatory_integral(phi, 0.0).value);
    double a1 = std::abs(oscillatory_integral(phi, 1.0 / x4).value);
    double a10 = std::abs(oscillatory_integral(phi, 10.0 / x4).value);
    double a100 = std::abs(oscillatory_integral(phi, 100.0 / x4).value);
    double monotone_bad = (a1 < a10) + (a10 < a100) + (a0 < a1);
    suite.add(make_check("osc_monotone", monotone_bad, {0.0, 0.0}));
    double f1 = a1 / a10, f2 = a10 / a100;
    suite.add(make_check("osc_decay_factor", std::min(f1, f2),
                         cfg.window_for("osc_decay_factor")));

    // Short-interval window averaging over a small grid.
    double avg_ratio_max = 0.0;
    for (double X : {2e5, 3e5, 4e5, 5e5, 7e5})
        for (double H : {std::pow(X, 0.3), 2.0 * std::pow(X, 0.3), std::pow(X, 0.5)})
            avg_ratio_max = std::max(avg_ratio_max, window_average_check(ctx.model(), X, H).ratio);
    suite.add(make_check("window_average_ratio_max", avg_ratio_max,
                         cfg.window_for("window_average_ratio_max")));

    return suite;
}

suite_result run_moments_suite(verify_context& ctx) {
    suite_result suite;
    suite.suite = "moments";
    const auto& cfg = ctx.config();

    double r4 = mean_square_ratio(ctx.model(), ctx.B(), 1e4);
    double r5 = mean_square_ratio(ctx.model(), ctx.B(), 1e5);
    double r6 = mean_square_ratio(ctx.model(), ctx.B(), 1e6);
    suite.add(make_check("mean_square_ratio", r6, cfg.window_for("mean_square_ratio")));
    double dev_bad = (std::fabs(r5 - 1.0) >= std::fabs(r4 - 1.0)) +
                     (std::fabs(r6 - 1.0) >= std::fabs(r5 - 1.0));
    suite.add(make_check("ratio_deviation_monotone", dev_bad, {0.0, 0.0}));

    suite.add(make_check("delta_m4_slope", ctx.delta_m4_report().fitted_slope,
                         cfg.window_for("delta_m4_slope")));
    suite.add(make_check("delta1_m4_slope", ctx.delta1_m4_report().fitted_slope,
                         cfg.window_for("delta1_m4_slope")));

    // (int delta1^2)^2 <= X int delta1^4 pointwise on the ladder.
    const auto& m2 = ctx.delta1_m2_report();
    const auto& m4 = ctx.delta1_m4_report();
    double cs_bad = 0;
    for (std::size_t i = 0; i < m2.X_values.size(); ++i)
        if (m2.moment_values[i] * m2.moment_values[i] >
            m2.X_values[i] * m4.moment_values[i])
            ++cs_bad;
    suite.add(make_check("cauchy_schwarz_violations", cs_bad, {0.0, 0.0}));
    return suite;
}

suite_result run_largevalues_suite(verify_context& ctx) {
    suite_result suite;
    suite.suite = "largevalues";
    const auto& cfg = ctx.config();
    const double X = 5e5;
    const double H = std::ceil(std::sqrt(X));
    auto rep = large_values_scan(ctx.model(), X, H, ctx.threads());

    double ratio_max = 0.0;
    for (double r : rep.bound_ratios) ratio_max = std::max(ratio_max, r);
    suite.add(make_check("largevalues_ratio_max", ratio_max,
                         cfg.window_for("largevalues_ratio_max")));

    std::uint64_t bucketed = rep.below_ladder + rep.above_ladder;
    std::uint64_t max_r = 0;
    for (auto r : rep.R_values) {
        bucketed += r;
        max_r = std::max(max_r, r);
    }
    suite.add(make_check("largevalues_partition",
                         static_cast<double>(bucketed) - static_cast<double>(rep.subinterval_count),
                         {0.0, 0.0}));
    double r_cap = X / H + 1.0;
    suite.add(make_check("largevalues_r_bound", static_cast<double>(max_r) / r_cap, {0.0, 1.0}));
    return suite;
}

suite_result run_quadruples_suite(verify_context& ctx) {
    suite_result suite;
    suite.suite = "quadruples";
    const auto& cfg = ctx.config();

    double mismatches = 0;
    std::uint64_t anomalies = 0;
    for (std::uint64_t n : {4, 8, 16, 32, 64}) {
        for (double delta : {1e-6, 1e-3, 1e-1, 1.0}) {
            auto brute = count_bruteforce(n, 4, delta);
            auto sorted = count_sorted(n, 4, delta, ctx.threads());
            if (brute.count != sorted.count) ++mismatches;
            anomalies += brute.anomalies + sorted.anomalies;
        }
    }
    suite.add(make_check("quadruples_equiv_mismatches", mismatches, {0.0, 0.0}));

    auto big = count_sorted(64, 4, 2.0, ctx.threads());
    suite.add(make_check("quadruples_delta_large_gap",
                         static_cast<double>(big.count) - 64.0 * 64.0 * 64.0 * 64.0,
                         {0.0, 0.0}));
    auto tiny = count_sorted(64, 4, 1e-30, ctx.threads());
    suite.add(make_check("quadruples_delta_zero_gap",
                         static_cast<double>(tiny.count) - (2.0 * 64.0 * 64.0 - 64.0),
                         {0.0, 0.0}));

    std::vector<std::uint64_t> n_list{128, 256, 512, 1024, 2048};
    double max_ratio = 0.0;
    for (std::uint64_t n : n_list) {
        std::vector<double> deltas;
        for (double e : {-3.0, -2.5, -2.0, -1.5, -1.0, -0.5})
            deltas.push_back(std::pow(static_cast<double>(n), e));
        auto scan = bound_ratio_scan(std::vector<std::uint64_t>{n}, deltas, 4, ctx.threads());
        max_ratio = std::max(max_ratio, scan.max_ratio);
        anomalies += scan.total_anomalies;
    }
    suite.add(make_check("quadruples_ratio_max", max_ratio,
                         cfg.window_for("quadruples_ratio_max")));
    suite.add(make_check("quadruples_anomalies", static_cast<double>(anomalies),
                         cfg.window_for("quadruples_anomalies")));
    return suite;
}

suite_result run_d4_suite(verify_context& ctx) {
    suite_result suite;
    suite.suite = "d4";
    const auto& cfg = ctx.config();
    auto& table = ctx.d4();

    suite.add(make_check("d4_a3", table.main_poly[3], cfg.window_for("d4_a3")));

    auto ladder = ctx.slope_ladder();
    std::vector<double> m2_vals, m4_vals;
    for (double X : ladder) {
        m2_vals.push_back(moment_delta4(table, 2, X, ctx.threads()));
        m4_vals.push_back(moment_delta4(table, 4, X, ctx.threads()));
    }
    double s2 = exponent_fit(ladder, m2_vals).slope;
    double s4 = exponent_fit(ladder, m4_vals).slope;
    suite.add(make_check("d4_m2_slope", s2, cfg.window_for("d4_m2_slope")));
    suite.add(make_check("d4_m4_slope", s4, cfg.window_for("d4_m4_slope")));
    suite.add(make_check("d4_slope_gap", ctx.delta_m4_report().fitted_slope - s4,
                         {1e-12, 10.0}));
    return suite;
}

std::vector<std::string> suite_names() {
    return {"voronoi", "moments", "largevalues", "quadruples", "d4"};
}

suite_result run_suite(verify_context& ctx, const std::string& name) {
    if (name == "voronoi") return run_voronoi_suite(ctx);
    if (name == "moments") return run_moments_suite(ctx);
    if (name == "largevalues") return run_largevalues_suite(ctx);
    if (name == "quadruples") return run_quadruples_suite(ctx);
    if (name == "d4") return run_d4_suite(ctx);
    if (name == "all") {
        suite_result all;
        all.suite = "all";
        for (const auto& n : suite_names()) {
            auto s = run_suite(ctx, n);
            for (auto& c : s.checks) all.add(std::move(c));
        }
        return all;
    }
    throw std::invalid_argument("verify: unknown suite " + name);
}

}  // namespace rslab
