#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rslab/error_term.hpp"

namespace rslab {

// Exact moment integrals.  delta is piecewise linear, so int delta^k over a
// unit interval has a closed form; delta1 is piecewise quadratic, so
// delta1^k has degree <= 8 and 5-node Gauss-Legendre integrates it exactly.
double moment_delta_exact(const error_term_model& model, int k, double X, int threads = 0);
double moment_delta1_exact(const error_term_model& model, int k, double X, int threads = 0);

// moment_delta1_exact(model, 2, X) divided by the predicted main term
// (2/13) (2 pi)^{-4} B X^{13/4}.
double mean_square_ratio(const error_term_model& model, const series_constant& B, double X);

struct exponent_fit_result {
    double slope = 0.0;
    double intercept = 0.0;
    double ci = 0.0;  // 2 x standard error of the slope
};

// Ordinary least squares on (log X, log moment).  Input order does not
// matter; points are canonicalized before accumulation.
exponent_fit_result exponent_fit(std::span<const double> X_values,
                                 std::span<const double> moment_values);

struct moment_report {
    int power = 0;
    std::string target;  // "delta" | "delta1" | "delta4"
    std::vector<double> X_values;
    std::vector<double> moment_values;
    double fitted_slope = 0.0;
    double slope_ci = 0.0;
};

moment_report build_moment_report(const error_term_model& model, int k, bool delta1_target,
                                  std::span<const double> X_values, int threads = 0);

// Large-values scan: [X, 2X] split into length-H subintervals (last may be
// shorter); per subinterval the exact sup of |delta| comes from the
// breakpoint values.  R(V) counts subintervals whose sup falls in [V, 2V)
// for the dyadic ladder V in [X^{1/2}, X^{3/5}].
struct large_values_report {
    double X = 0.0;
    double H = 0.0;
    std::uint64_t subinterval_count = 0;
    std::vector<double> V_values;
    std::vector<std::uint64_t> R_values;
    std::vector<double> bound_ratios;    // R V^5 / X^3
    std::vector<double> i_sandwich_lo;   // V^4 R H
    std::vector<double> i_sandwich_hi;   // (2V)^4 R H
    std::uint64_t below_ladder = 0;      // sup below the bottom bucket
    std::uint64_t above_ladder = 0;      // sup at or above 2 V_top
    double max_sup = 0.0;
};

large_values_report large_values_scan(const error_term_model& model, double X, double H,
                                      int threads = 0);

}  // namespace rslab
