#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rslab/error_term.hpp"

namespace rslab {

// The two truncated expansions share one shape,
//   x^{amplitude_exponent} * normalizer *
//       sum_{k<=K0} c_k k^{coeff_exponent} sin(8 pi (k x)^{1/4} + phase),
// and differ only in the parameter bundle.  The bundles are data so the
// degree-4 shape stays parameterizable, but only these two are exercised.
enum class expansion_target { delta, delta1 };

struct voronoi_series {
    expansion_target target = expansion_target::delta;
    double amplitude_exponent = 0.0;
    double normalizer = 0.0;
    double coeff_exponent = 0.0;
    double phase = 0.0;
    std::uint64_t k0 = 0;

    static voronoi_series for_delta(std::uint64_t k0);
    static voronoi_series for_delta1(std::uint64_t k0);
};

// Main sum evaluated in descending k (smallest terms first).
double eval_truncated(const voronoi_series& series, const coefficient_table& table, double x);

struct truncation_scan_row {
    std::uint64_t k0 = 0;
    double rms = 0.0;             // RMS over samples of (exact - truncated)
    double max_normalized = 0.0;  // max over samples of |err| / error-term shape
};

struct truncation_scan {
    std::vector<truncation_scan_row> rows;
    double slope = 0.0;  // log RMS vs log K0
};

truncation_scan truncation_error_scan(const error_term_model& model, expansion_target target,
                                      std::span<const double> x_samples,
                                      std::span<const std::uint64_t> k0_list, int threads = 0);

// C-infinity weight: 0 outside [X/2, 5X/2], 1 on [X, 2X], with ramps built
// from integrals of psi(u) = exp(-1/(u(1-u))).
class smooth_weight {
public:
    explicit smooth_weight(double X);
    double operator()(double x) const;
    double X() const { return X_; }
    double support_lo() const { return X_ / 2.0; }
    double support_hi() const { return 5.0 * X_ / 2.0; }

private:
    double ramp(double t) const;  // normalized int_0^t psi / int_0^1 psi
    double X_;
    double psi_mass_;
};

// integral over the support of phi(x) e(4 pi D x^{1/4}) with e(z) = e^{2 pi i z},
// by panel quadrature with panel width at most a quarter period of the local
// frequency; successive global refinements must agree or the result is
// flagged as non-converged.
struct oscillatory_result {
    std::complex<double> value;
    bool converged = false;
    int refinements = 0;
};

oscillatory_result oscillatory_integral(const smooth_weight& weight, double D,
                                        double rel_tol = 1e-9);

// Indicator-weight variant (1 on the plateau [X, 2X], 0 elsewhere); used to
// bound the mollifier shoulder contribution.
oscillatory_result oscillatory_integral_plateau(const smooth_weight& weight, double D,
                                                double rel_tol = 1e-9);

}  // namespace rslab
