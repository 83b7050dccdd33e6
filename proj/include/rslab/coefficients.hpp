#pragma once

#include <cstdint>
#include <vector>

#include "rslab/int128.hpp"

namespace rslab {

// Above this limit the 128-bit series arithmetic is known to be at risk of
// overflow; larger tables are rejected outright instead of being checked
// term by term.
inline constexpr std::uint64_t kTauHardLimit = 20'000'000;

// Exact Fourier coefficients tau(n) of the weight-12 discriminant cusp form,
// index 1..limit.  tau[0] is unused and zero.
struct tau_table {
    std::uint64_t limit = 0;
    std::vector<int128> tau;
};

// Exact divisor power sums sigma_3 and sigma_5, index 1..limit.
struct sigma_tables {
    std::uint64_t limit = 0;
    std::vector<int128> sigma3;
    std::vector<int128> sigma5;
};

// Normalized coefficients and their compensated prefix sums, index 1..limit:
//   lambda(n) = tau(n) * n^{-(weight-1)/2}
//   c(n)      = sum over m with m^2 | n of lambda(n/m^2)^2
//   prefix(n) = sum_{k<=n} c(k)
struct coefficient_table {
    std::uint64_t limit = 0;
    double weight = 12.0;
    std::vector<double> lambda;
    std::vector<double> c;
    std::vector<double> prefix;

    double prefix_at(std::uint64_t n) const { return n == 0 ? 0.0 : prefix[n]; }
};

// Partial sum of sum_n c(n)^2 n^{-7/4} together with an empirical tail model.
// The tail bound is reported separately and never folded into the value.
struct series_constant {
    double value = 0.0;
    double tail_bound = 0.0;
    std::uint64_t terms_used = 0;
};

sigma_tables build_sigma_tables(std::uint64_t limit);

tau_table build_tau_table(std::uint64_t limit, int threads = 0);

coefficient_table build_coefficient_table(const tau_table& tau, double weight = 12.0);

// limit = 0 evaluates over the whole table; a smaller limit evaluates the
// same series truncated there (prefix determinism makes this exact).
series_constant series_constant_B(const coefficient_table& table, std::uint64_t limit = 0);

}  // namespace rslab
