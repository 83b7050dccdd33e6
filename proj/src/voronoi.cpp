#include "rslab/voronoi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rslab/kahan.hpp"
#include "rslab/moments.hpp"
#include "rslab/parallel.hpp"

namespace rslab {

namespace {
constexpr double kPi = std::numbers::pi;

// 16-node Gauss-Legendre on [-1,1] for the oscillatory panels.
constexpr int kPanelNodes = 16;
constexpr double kGL16X[kPanelNodes] = {
    -0.989400934991649932596154, -0.944575023073232576077988,
    -0.865631202387831743880468, -0.755404408355003033895101,
    -0.617876244402643748446672, -0.458016777657227386342420,
    -0.281603550779258913230461, -0.095012509837637440185319,
    0.095012509837637440185319,  0.281603550779258913230461,
    0.458016777657227386342420,  0.617876244402643748446672,
    0.755404408355003033895101,  0.865631202387831743880468,
    0.944575023073232576077988,  0.989400934991649932596154,
};
constexpr double kGL16W[kPanelNodes] = {
    0.027152459411754094851781, 0.062253523938647892862844,
    0.095158511682492784809925, 0.124628971255533872052476,
    0.149595988816576732081501, 0.169156519395002538189312,
    0.182603415044923588866764, 0.189450610455068496285397,
    0.189450610455068496285397, 0.182603415044923588866764,
    0.169156519395002538189312, 0.149595988816576732081501,
    0.124628971255533872052476, 0.095158511682492784809925,
    0.062253523938647892862844, 0.027152459411754094851781,
};

template <typename Weight>
std::complex<double> panel_pass(const Weight& w, double lo, double hi, double D,
                                int split_factor) {
    // Phase 8 pi^2 D x^{1/4}; local frequency 2 pi^2 D x^{-3/4}.  Panels are
    // capped at a quarter period of the frequency at their left edge and at
    // a fixed fraction of the support for the D ~ 0 regime.
    const double theta_scale = 8.0 * kPi * kPi * D;
    const double smooth_cap = (hi - lo) / (16.0 * split_factor);
    std::complex<double> total = 0.0;
    double a = lo;
    while (a < hi) {
        double width = smooth_cap;
        if (D != 0.0) {
            double freq = std::fabs(2.0 * kPi * kPi * D) * std::pow(a, -0.75);
            width = std::min(width, (kPi / 2.0) / freq / split_factor);
        }
        double b = std::min(a + width, hi);
        double mid = (a + b) / 2.0, half = (b - a) / 2.0;
        std::complex<double> acc = 0.0;
        for (int g = 0; g < kPanelNodes; ++g) {
            double x = mid + half * kGL16X[g];
            double phase = theta_scale * std::pow(x, 0.25);
            acc += kGL16W[g] * w(x) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        total += half * acc;
        a = b;
    }
    return total;
}

template <typename Weight>
oscillatory_result integrate_oscillatory(const Weight& w, double lo, double hi, double D,
                                         double rel_tol) {
    oscillatory_result res;
    std::complex<double> prev = panel_pass(w, lo, hi, D, 1);
    const double abs_floor = 1e-12 * (hi - lo);
    for (int r = 1; r <= 8; ++r) {
        std::complex<double> cur = panel_pass(w, lo, hi, D, 1 << r);
        res.refinements = r;
        if (std::abs(cur - prev) <= std::max(rel_tol * std::abs(cur), abs_floor)) {
            res.value = cur;
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

}  // namespace

voronoi_series voronoi_series::for_delta(std::uint64_t k0) {
    return {expansion_target::delta, 3.0 / 8.0, 1.0 / (2.0 * kPi), -5.0 / 8.0,
            3.0 * kPi / 4.0, k0};
}

voronoi_series voronoi_series::for_delta1(std::uint64_t k0) {
    return {expansion_target::delta1, 9.0 / 8.0, 1.0 / (4.0 * kPi * kPi), -7.0 / 8.0,
            kPi / 4.0, k0};
}

double eval_truncated(const voronoi_series& series, const coefficient_table& table, double x) {
    if (series.k0 > table.limit)
        throw std::invalid_argument("eval_truncated: K0 exceeds the coefficient table");
    if (!(x >= 1.0))
        throw std::invalid_argument("eval_truncated: x must be >= 1");
    // Stated validity ranges, implied constants taken as 1.
    if (series.target == expansion_target::delta && static_cast<double>(series.k0) > x)
        throw std::invalid_argument("eval_truncated: K0 must be <= x for the delta bundle");
    if (series.target == expansion_target::delta1 && static_cast<double>(series.k0) > x * x)
        throw std::invalid_argument("eval_truncated: K0 must be <= x^2 for the delta1 bundle");
    if (series.k0 == 0) return 0.0;

    kahan_accumulator acc;
    for (std::uint64_t k = series.k0; k >= 1; --k) {
        auto kd = static_cast<double>(k);
        double arg = 8.0 * kPi * std::pow(kd * x, 0.25) + series.phase;
        acc.add(table.c[k] * std::pow(kd, series.coeff_exponent) * std::sin(arg));
    }
    return std::pow(x, series.amplitude_exponent) * series.normalizer * acc.value();
}

truncation_scan truncation_error_scan(const error_term_model& model, expansion_target target,
                                      std::span<const double> x_samples,
                                      std::span<const std::uint64_t> k0_list, int threads) {
    if (x_samples.empty() || k0_list.empty())
        throw std::invalid_argument("truncation_error_scan: empty sample set");

    truncation_scan scan;
    scan.rows.resize(k0_list.size());
    const std::uint64_t n_jobs = k0_list.size() * x_samples.size();
    std::vector<double> err(n_jobs, 0.0);

    for_chunks(n_jobs, kReductionChunks, threads,
               [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                   for (std::uint64_t j = begin; j < end; ++j) {
                       std::uint64_t ki = j / x_samples.size();
                       std::uint64_t xi = j % x_samples.size();
                       double x = x_samples[xi];
                       auto series = target == expansion_target::delta
                                         ? voronoi_series::for_delta(k0_list[ki])
                                         : voronoi_series::for_delta1(k0_list[ki]);
                       double exact = target == expansion_target::delta ? model.delta(x)
                                                                        : model.delta1(x);
                       err[j] = exact - eval_truncated(series, model.table(), x);
                   }
               });

    std::vector<double> k0d, rms;
    for (std::size_t ki = 0; ki < k0_list.size(); ++ki) {
        kahan_accumulator sq;
        double max_norm = 0.0;
        for (std::size_t xi = 0; xi < x_samples.size(); ++xi) {
            double e = err[ki * x_samples.size() + xi];
            sq.add(e * e);
            double x = x_samples[xi];
            auto k0 = static_cast<double>(k0_list[ki]);
            // Error-term shapes from the two expansions.
            double shape = target == expansion_target::delta
                               ? std::pow(x, 0.75) * std::pow(k0, -0.25)
                               : std::pow(x, 1.5) * std::pow(k0, -0.5) + x;
            max_norm = std::max(max_norm, std::fabs(e) / shape);
        }
        scan.rows[ki] = {k0_list[ki],
                         std::sqrt(sq.value() / static_cast<double>(x_samples.size())),
                         max_norm};
        k0d.push_back(static_cast<double>(k0_list[ki]));
        rms.push_back(scan.rows[ki].rms);
    }
    scan.slope = k0_list.size() >= 4 ? exponent_fit(k0d, rms).slope : 0.0;
    return scan;
}

smooth_weight::smooth_weight(double X) : X_(X) {
    if (!(X >= 1.0)) throw std::invalid_argument("smooth_weight: X must be >= 1");
    // One-time mass of psi on [0,1] by composite quadrature; psi and all its
    // derivatives vanish at the endpoints.
    kahan_accumulator acc;
    const int panels = 64;
    for (int p = 0; p < panels; ++p) {
        double a = static_cast<double>(p) / panels, h = 1.0 / (2.0 * panels);
        for (int g = 0; g < kPanelNodes; ++g) {
            double u = a + h + h * kGL16X[g];
            acc.add(h * kGL16W[g] * std::exp(-1.0 / (u * (1.0 - u))));
        }
    }
    psi_mass_ = acc.value();
}

double smooth_weight::ramp(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    kahan_accumulator acc;
    const int panels = 16;
    for (int p = 0; p < panels; ++p) {
        double a = t * p / panels, h = t / (2.0 * panels);
        for (int g = 0; g < kPanelNodes; ++g) {
            double u = a + h + h * kGL16X[g];
            if (u > 0.0 && u < 1.0) acc.add(h * kGL16W[g] * std::exp(-1.0 / (u * (1.0 - u))));
        }
    }
    return acc.value() / psi_mass_;
}

double smooth_weight::operator()(double x) const {
    if (x <= X_ / 2.0 || x >= 5.0 * X_ / 2.0) return 0.0;
    if (x < X_) return ramp((x - X_ / 2.0) / (X_ / 2.0));
    if (x <= 2.0 * X_) return 1.0;
    return ramp((5.0 * X_ / 2.0 - x) / (X_ / 2.0));
}

oscillatory_result oscillatory_integral(const smooth_weight& weight, double D, double rel_tol) {
    return integrate_oscillatory([&](double x) { return weight(x); }, weight.support_lo(),
                                 weight.support_hi(), D, rel_tol);
}

oscillatory_result oscillatory_integral_plateau(const smooth_weight& weight, double D,
                                                double rel_tol) {
    return integrate_oscillatory([](double) { return 1.0; }, weight.X(), 2.0 * weight.X(), D,
                                 rel_tol);
}

}  // namespace rslab
