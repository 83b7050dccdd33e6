// rslab: Rankin-Selberg error-term laboratory.
//
// Subcommands build the exact coefficient tables, evaluate the error terms
// and their truncated expansions, run the moment/large-values/quadruple
// scans, and drive the acceptance windows.  All emitted numbers are
// bit-reproducible for a fixed config regardless of worker count.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rslab/cache.hpp"
#include "rslab/config.hpp"
#include "rslab/d4.hpp"
#include "rslab/error_term.hpp"
#include "rslab/int128.hpp"
#include "rslab/moments.hpp"
#include "rslab/quadruples.hpp"
#include "rslab/verify.hpp"
#include "rslab/voronoi.hpp"

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json config_json(const rslab::run_config& cfg) {
    json windows = json::object();
    for (const auto& [name, w] : cfg.windows) windows[name] = {w.lo, w.hi};
    return {{"table_limit", cfg.table_limit},
            {"cache_dir", cfg.cache_dir},
            {"thread_count", cfg.thread_count},
            {"output_format", cfg.output_format},
            {"windows", windows}};
}

json suite_json(const rslab::run_config& cfg, const rslab::suite_result& suite) {
    json checks = json::array();
    for (const auto& c : suite.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"window", {c.win.lo, c.win.hi}},
                          {"pass", c.pass}});
    return {{"config", config_json(cfg)},
            {"suite", suite.suite},
            {"checks", checks},
            {"pass", suite.pass}};
}

int cmd_coeffs(rslab::verify_context& ctx) {
    auto table = ctx.coefficients();
    auto est = rslab::estimate_C(*table);
    auto b = rslab::series_constant_B(*table);
    std::printf("limit=%" PRIu64 "\n", table->limit);
    std::printf("c_1=%s\n", num(table->c[1]).c_str());
    std::printf("C=%s\n", num(est.value).c_str());
    std::printf("C_difference=%s\n", num(est.difference).c_str());
    std::printf("C_uncertainty=%s\n", num(est.uncertainty).c_str());
    std::printf("C_rel_uncertainty=%s\n", num(est.uncertainty / est.value).c_str());
    std::printf("B=%s\n", num(b.value).c_str());
    std::printf("B_tail_bound=%s\n", num(b.tail_bound).c_str());
    return 0;
}

int cmd_delta(rslab::verify_context& ctx, const std::vector<double>& xs, double win_x,
              double win_h) {
    const auto& model = ctx.model();
    if (!xs.empty()) {
        std::printf("x,delta,delta1\n");
        for (double x : xs)
            std::printf("%s,%s,%s\n", num(x).c_str(), num(model.delta(x)).c_str(),
                        num(model.delta1(x)).c_str());
    }
    if (win_x > 0.0) {
        auto w = rslab::window_average_check(model, win_x, win_h);
        std::printf("X,H,direct,averaged,ratio\n");
        std::printf("%s,%s,%s,%s,%s\n", num(win_x).c_str(), num(win_h).c_str(),
                    num(w.direct).c_str(), num(w.averaged).c_str(), num(w.ratio).c_str());
    }
    return 0;
}

int cmd_voronoi(rslab::verify_context& ctx, bool delta1_target, std::uint64_t k0_max,
                const std::vector<double>& xs) {
    const auto& model = ctx.model();
    std::printf("x,k0,exact,truncated,abs_err\n");
    std::vector<std::uint64_t> k0s;
    for (std::uint64_t k0 = 16; k0 <= k0_max; k0 *= 2) k0s.push_back(k0);
    for (double x : xs) {
        double exact = delta1_target ? model.delta1(x) : model.delta(x);
        for (auto k0 : k0s) {
            auto series = delta1_target ? rslab::voronoi_series::for_delta1(k0)
                                        : rslab::voronoi_series::for_delta(k0);
            double t = rslab::eval_truncated(series, model.table(), x);
            std::printf("%s,%" PRIu64 ",%s,%s,%s\n", num(x).c_str(), k0, num(exact).c_str(),
                        num(t).c_str(), num(std::fabs(exact - t)).c_str());
        }
    }
    return 0;
}

int cmd_moments(rslab::verify_context& ctx, const std::string& target, int k) {
    auto ladder = ctx.slope_ladder();
    std::vector<double> moments;
    for (double X : ladder) {
        double m;
        if (target == "d4")
            m = rslab::moment_delta4(ctx.d4(), k, X, ctx.threads());
        else if (target == "delta1")
            m = rslab::moment_delta1_exact(ctx.model(), k, X, ctx.threads());
        else
            m = rslab::moment_delta_exact(ctx.model(), k, X, ctx.threads());
        moments.push_back(m);
    }
    auto fit = rslab::exponent_fit(ladder, moments);
    if (ctx.config().output_format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < ladder.size(); ++i)
            rows.push_back({{"X", ladder[i]}, {"k", k}, {"moment", moments[i]}});
        json out = {{"config", config_json(ctx.config())},
                    {"target", target},
                    {"rows", rows},
                    {"slope", fit.slope},
                    {"slope_ci", fit.ci},
                    {"intercept", fit.intercept}};
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("X,k,moment\n");
        for (std::size_t i = 0; i < ladder.size(); ++i)
            std::printf("%s,%d,%s\n", num(ladder[i]).c_str(), k, num(moments[i]).c_str());
        std::printf("# slope=%s ci=%s\n", num(fit.slope).c_str(), num(fit.ci).c_str());
    }
    return 0;
}

int cmd_largevalues(rslab::verify_context& ctx, double X, double H) {
    if (H <= 0.0) H = std::ceil(std::sqrt(X));
    auto rep = rslab::large_values_scan(ctx.model(), X, H, ctx.threads());
    std::printf("X,H,V,R,bound_ratio\n");
    for (std::size_t j = 0; j < rep.V_values.size(); ++j)
        std::printf("%s,%s,%s,%" PRIu64 ",%s\n", num(X).c_str(), num(H).c_str(),
                    num(rep.V_values[j]).c_str(), rep.R_values[j],
                    num(rep.bound_ratios[j]).c_str());
    std::printf("# subintervals=%" PRIu64 " below_ladder=%" PRIu64 " above_ladder=%" PRIu64
                " max_sup=%s\n",
                rep.subinterval_count, rep.below_ladder, rep.above_ladder,
                num(rep.max_sup).c_str());
    return 0;
}

int cmd_quadruples(rslab::verify_context& ctx, const std::vector<std::uint64_t>& ns,
                   const std::vector<double>& deltas, int k_root) {
    auto scan = rslab::bound_ratio_scan(ns, deltas, k_root, ctx.threads());
    std::printf("N,k,delta,count,bound,ratio\n");
    for (const auto& row : scan.rows)
        std::printf("%" PRIu64 ",%d,%s,%" PRIu64 ",%s,%s\n", row.n, k_root,
                    num(row.delta).c_str(), row.count, num(row.bound).c_str(),
                    num(row.ratio).c_str());
    std::printf("# max_ratio=%s anomalies=%" PRIu64 "\n", num(scan.max_ratio).c_str(),
                scan.total_anomalies);
    return 0;
}

int cmd_d4(rslab::verify_context& ctx) {
    auto& table = ctx.d4();
    std::printf("limit=%" PRIu64 "\n", table.limit);
    std::printf("a0=%s\na1=%s\na2=%s\na3=%s\n", num(table.main_poly[0]).c_str(),
                num(table.main_poly[1]).c_str(), num(table.main_poly[2]).c_str(),
                num(table.main_poly[3]).c_str());
    for (double x : {1e4, 1e5, 5e5})
        if (x <= static_cast<double>(table.limit))
            std::printf("delta4(%s)=%s\n", num(x).c_str(),
                        num(rslab::delta4(table, x)).c_str());
    return 0;
}

int cmd_verify(rslab::verify_context& ctx, const std::string& suite_name) {
    auto suite = rslab::run_suite(ctx, suite_name);
    std::printf("%s\n", suite_json(ctx.config(), suite).dump(2).c_str());
    return suite.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rankin-Selberg error-term laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t limit = 0;
    std::string cache_dir;
    int threads = -1;
    std::string output;
    app.add_option("--config", config_path, "Flat key=value config file");
    app.add_option("--limit", limit, "Coefficient table limit");
    app.add_option("--cache-dir", cache_dir, "Cache directory");
    app.add_option("--threads", threads, "Worker count (0 = auto)");
    app.add_option("--output", output, "Output format: csv | json");

    auto* coeffs = app.add_subcommand("coeffs", "Build or load tables; print summary");

    auto* delta = app.add_subcommand("delta", "Evaluate delta and delta1");
    std::vector<double> delta_xs;
    double win_x = 0.0, win_h = 0.0;
    delta->add_option("--x", delta_xs, "Evaluation points");
    delta->add_option("--window-x", win_x, "Window-average center X");
    delta->add_option("--window-h", win_h, "Window-average half-width H");

    auto* voronoi = app.add_subcommand("voronoi", "Truncated expansion table");
    std::string vor_target = "delta";
    std::uint64_t k0_max = 1 << 14;
    std::vector<double> vor_xs{1e5 + 0.5};
    voronoi->add_option("--target", vor_target, "delta | delta1")
        ->check(CLI::IsMember({"delta", "delta1"}));
    voronoi->add_option("--k0-max", k0_max, "Largest dyadic truncation");
    voronoi->add_option("--x", vor_xs, "Sample points");

    auto* moments = app.add_subcommand("moments", "Moment ladder CSV");
    std::string target = "delta";
    int power = 4;
    moments->add_option("--target", target, "delta | delta1 | d4")
        ->check(CLI::IsMember({"delta", "delta1", "d4"}));
    moments->add_option("--k", power, "Moment power")->check(CLI::IsMember({2, 4}));

    auto* largevalues = app.add_subcommand("largevalues", "Large-values scan CSV");
    double lv_x = 5e5, lv_h = 0.0;
    largevalues->add_option("--X", lv_x, "Left endpoint of [X, 2X]");
    largevalues->add_option("--H", lv_h, "Subinterval length (default ceil(sqrt(X)))");

    auto* quadruples = app.add_subcommand("quadruples", "Quadruple-count ratio CSV");
    std::vector<std::uint64_t> q_ns{128, 256, 512};
    std::vector<double> q_deltas{1e-6, 1e-4, 1e-2};
    int q_k = 4;
    quadruples->add_option("--N", q_ns, "Range parameters");
    quadruples->add_option("--delta", q_deltas, "Window parameters");
    quadruples->add_option("--k", q_k, "Root index k");

    auto* d4 = app.add_subcommand("d4", "Divisor-function baseline summary");

    auto* verify = app.add_subcommand("verify", "Run an acceptance suite (JSON report)");
    std::string suite_name;
    verify->add_option("suite", suite_name, "voronoi | moments | largevalues | quadruples | d4 | all")
        ->required();

    auto* scan = app.add_subcommand("scan", "Emit a named scan as CSV");
    std::string scan_name;
    scan->add_option("name", scan_name, "voronoi | moments | largevalues | quadruples")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        rslab::run_config cfg =
            config_path.empty() ? rslab::run_config::defaults() : rslab::load_config(config_path);
        if (limit != 0) cfg.table_limit = limit;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (threads >= 0) cfg.thread_count = threads;
        if (!output.empty()) {
            if (output != "csv" && output != "json")
                throw std::invalid_argument("--output must be csv or json");
            cfg.output_format = output;
        }
        cfg.validate();
        rslab::verify_context ctx(cfg);

        if (*coeffs) return cmd_coeffs(ctx);
        if (*delta) return cmd_delta(ctx, delta_xs, win_x, win_h);
        if (*voronoi) return cmd_voronoi(ctx, vor_target == "delta1", k0_max, vor_xs);
        if (*moments) return cmd_moments(ctx, target, power);
        if (*largevalues) return cmd_largevalues(ctx, lv_x, lv_h);
        if (*quadruples) return cmd_quadruples(ctx, q_ns, q_deltas, q_k);
        if (*d4) return cmd_d4(ctx);
        if (*verify) return cmd_verify(ctx, suite_name);
        if (*scan) {
            if (scan_name == "voronoi") return cmd_voronoi(ctx, false, 1 << 14, {1e5 + 0.5});
            if (scan_name == "moments") return cmd_moments(ctx, "delta", 4);
            if (scan_name == "largevalues") return cmd_largevalues(ctx, 5e5, 0.0);
            if (scan_name == "quadruples")
                return cmd_quadruples(ctx, {128, 256, 512}, {1e-6, 1e-4, 1e-2}, 4);
            throw std::invalid_argument("scan: unknown name " + scan_name);
        }
    } catch (const rslab::cache_error& e) {
        std::fprintf(stderr, "cache error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
