#include "rslab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rslab/kahan.hpp"
#include "rslab/parallel.hpp"

namespace rslab {

namespace {

// 5-node Gauss-Legendre on [0,1]; exact through degree 9.
constexpr double kGL5Nodes[5] = {
    0.046910077030668003601187,
    0.230765344947158454481843,
    0.5,
    0.769234655052841545518157,
    0.953089922969331996398813,
};
constexpr double kGL5Weights[5] = {
    0.118463442528094543757132,
    0.239314335249683234020646,
    0.284444444444444444444444,
    0.239314335249683234020646,
    0.118463442528094543757132,
};

// int_0^1 (a + (b-a)s)^k ds as a symmetric power sum; no cancellation and
// no special case at C = 0.
double linear_power_integral(double a, double b, int k) {
    if (k == 2) return (a * a + a * b + b * b) / 3.0;
    double a2 = a * a, b2 = b * b;
    return (a2 * a2 + a2 * a * b + a2 * b2 + a * b * b2 + b2 * b2) / 5.0;
}

void require_moment_args(const error_term_model& model, int k, double X) {
    if (k != 2 && k != 4)
        throw std::invalid_argument("moment: k must be 2 or 4");
    if (!(X >= 0.0) || X > static_cast<double>(model.limit()))
        throw std::invalid_argument("moment: X outside [0, limit]");
}

}  // namespace

double moment_delta_exact(const error_term_model& model, int k, double X, int threads) {
    require_moment_args(model, k, X);
    const auto& table = model.table();
    const double C = model.C();
    const auto full = static_cast<std::uint64_t>(std::floor(X));

    std::vector<kahan_accumulator> partial(kReductionChunks);
    for_chunks(full, kReductionChunks, threads,
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   kahan_accumulator acc;
                   for (std::uint64_t n = begin; n < end; ++n) {
                       double s = table.prefix_at(n);
                       double v0 = s - C * static_cast<double>(n);
                       double v1 = s - C * static_cast<double>(n + 1);
                       acc.add(linear_power_integral(v0, v1, k));
                   }
                   partial[chunk] = acc;
               });
    kahan_accumulator total;
    for (const auto& p : partial) total.merge(p);

    double w = X - static_cast<double>(full);
    if (w > 0.0) {
        double s = table.prefix_at(full);
        double v0 = s - C * static_cast<double>(full);
        double v1 = s - C * X;
        total.add(w * linear_power_integral(v0, v1, k));
    }
    return total.value();
}

double moment_delta1_exact(const error_term_model& model, int k, double X, int threads) {
    require_moment_args(model, k, X);
    const auto& table = model.table();
    const double C = model.C();
    const auto full = static_cast<std::uint64_t>(std::floor(X));

    std::vector<kahan_accumulator> partial(kReductionChunks);
    for_chunks(full, kReductionChunks, threads,
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   kahan_accumulator acc;
                   for (std::uint64_t n = begin; n < end; ++n) {
                       double d1 = model.delta1_prefix(n);
                       double v0 = table.prefix_at(n) - C * static_cast<double>(n);
                       for (int g = 0; g < 5; ++g) {
                           double s = kGL5Nodes[g];
                           double val = d1 + v0 * s - C * s * s / 2.0;
                           double p = val * val;
                           if (k == 4) p *= p;
                           acc.add(kGL5Weights[g] * p);
                       }
                   }
                   partial[chunk] = acc;
               });
    kahan_accumulator total;
    for (const auto& p : partial) total.merge(p);

    double w = X - static_cast<double>(full);
    if (w > 0.0) {
        double d1 = model.delta1_prefix(full);
        double v0 = table.prefix_at(full) - C * static_cast<double>(full);
        for (int g = 0; g < 5; ++g) {
            double s = kGL5Nodes[g] * w;
            double val = d1 + v0 * s - C * s * s / 2.0;
            double p = val * val;
            if (k == 4) p *= p;
            total.add(w * kGL5Weights[g] * p);
        }
    }
    return total.value();
}

double mean_square_ratio(const error_term_model& model, const series_constant& B, double X) {
    if (!(X >= 1e4))
        throw std::invalid_argument("mean_square_ratio: X must be >= 1e4");
    double m2 = moment_delta1_exact(model, 2, X);
    double two_pi = 2.0 * std::numbers::pi;
    double main = (2.0 / 13.0) * std::pow(two_pi, -4.0) * B.value * std::pow(X, 3.25);
    return m2 / main;
}

exponent_fit_result exponent_fit(std::span<const double> X_values,
                                 std::span<const double> moment_values) {
    if (X_values.size() != moment_values.size() || X_values.size() < 4)
        throw std::invalid_argument("exponent_fit: need >= 4 (X, moment) pairs");

    // Canonical ordering makes the fit independent of input permutation.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(X_values.size());
    for (std::size_t i = 0; i < X_values.size(); ++i) {
        if (!(X_values[i] > 0.0) || !(moment_values[i] > 0.0))
            throw std::invalid_argument("exponent_fit: values must be positive");
        pts.emplace_back(X_values[i], moment_values[i]);
    }
    std::sort(pts.begin(), pts.end());

    const auto n = static_cast<long double>(pts.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        long double lx = logl(x), ly = logl(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    long double denom = n * sxx - sx * sx;
    if (denom <= 0)
        throw std::invalid_argument("exponent_fit: degenerate X values");
    long double slope = (n * sxy - sx * sy) / denom;
    long double intercept = (sy - slope * sx) / n;

    long double ss_res = 0, ss_x = 0;
    long double mean_x = sx / n;
    for (const auto& [x, y] : pts) {
        long double lx = logl(x), ly = logl(y);
        long double r = ly - (slope * lx + intercept);
        ss_res += r * r;
        ss_x += (lx - mean_x) * (lx - mean_x);
    }
    long double se = sqrtl(ss_res / (n - 2) / ss_x);

    return {static_cast<double>(slope), static_cast<double>(intercept),
            static_cast<double>(2.0L * se)};
}

moment_report build_moment_report(const error_term_model& model, int k, bool delta1_target,
                                  std::span<const double> X_values, int threads) {
    moment_report r;
    r.power = k;
    r.target = delta1_target ? "delta1" : "delta";
    r.X_values.assign(X_values.begin(), X_values.end());
    for (double X : X_values)
        r.moment_values.push_back(delta1_target ? moment_delta1_exact(model, k, X, threads)
                                                : moment_delta_exact(model, k, X, threads));
    auto fit = exponent_fit(r.X_values, r.moment_values);
    r.fitted_slope = fit.slope;
    r.slope_ci = fit.ci;
    return r;
}

large_values_report large_values_scan(const error_term_model& model, double X, double H,
                                      int threads) {
    if (!(H >= std::sqrt(X)) || !(H <= X))
        throw std::invalid_argument("large_values_scan: need X^{1/2} <= H <= X");
    if (2.0 * X > static_cast<double>(model.limit()))
        throw std::invalid_argument("large_values_scan: 2X beyond table");

    large_values_report rep;
    rep.X = X;
    rep.H = H;
    const auto n_sub = static_cast<std::uint64_t>(std::ceil(X / H));
    rep.subinterval_count = n_sub;

    const auto& table = model.table();
    const double C = model.C();

    // Exact sup of |delta| per subinterval: delta is piecewise linear with
    // breakpoints at integers, so the extrema are the endpoint values and the
    // one-sided limits at each interior integer.
    std::vector<double> sups(n_sub, 0.0);
    for_chunks(n_sub, kReductionChunks, threads,
               [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                   for (std::uint64_t i = begin; i < end; ++i) {
                       double a = X + static_cast<double>(i) * H;
                       double b = std::min(X + static_cast<double>(i + 1) * H, 2.0 * X);
                       double m = std::max(std::fabs(model.delta(a)), std::fabs(model.delta(b)));
                       auto lo = static_cast<std::uint64_t>(std::floor(a)) + 1;
                       auto hi = static_cast<std::uint64_t>(std::floor(b));
                       for (std::uint64_t n = lo; n <= hi; ++n) {
                           double right = table.prefix_at(n) - C * static_cast<double>(n);
                           double left = table.prefix_at(n - 1) - C * static_cast<double>(n);
                           m = std::max(m, std::max(std::fabs(right), std::fabs(left)));
                       }
                       sups[i] = m;
                   }
               });
    rep.max_sup = *std::max_element(sups.begin(), sups.end());

    // Dyadic ladder V_j = X^{3/5} 2^{-j} down to X^{1/2}; buckets [V, 2V).
    for (double V = std::pow(X, 0.6); V >= std::pow(X, 0.5); V /= 2.0)
        rep.V_values.push_back(V);
    rep.R_values.assign(rep.V_values.size(), 0);

    const double v_top = rep.V_values.front();
    const double v_bot = rep.V_values.back();
    for (double s : sups) {
        if (s >= 2.0 * v_top) {
            ++rep.above_ladder;
            continue;
        }
        if (s < v_bot) {
            ++rep.below_ladder;
            continue;
        }
        for (std::size_t j = 0; j < rep.V_values.size(); ++j) {
            double V = rep.V_values[j];
            if (s >= V && s < 2.0 * V) {
                ++rep.R_values[j];
                break;
            }
        }
    }
    for (std::size_t j = 0; j < rep.V_values.size(); ++j) {
        double V = rep.V_values[j];
        auto R = static_cast<double>(rep.R_values[j]);
        rep.bound_ratios.push_back(R * std::pow(V, 5.0) / std::pow(X, 3.0));
        rep.i_sandwich_lo.push_back(std::pow(V, 4.0) * R * H);
        rep.i_sandwich_hi.push_back(16.0 * std::pow(V, 4.0) * R * H);
    }
    return rep;
}

}  // namespace rslab
