#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rslab {

// Fourfold divisor function d4 = 1*1*1*1 (Dirichlet convolution), its
// compensated prefix sums, and a fitted cubic-in-log main term
//   main(x) = x (a3 log^3 x + a2 log^2 x + a1 log x + a0).
// The residual prefix(floor(x)) - main(x) is the working error term.
struct d4_table {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> d4;
    std::vector<double> prefix;
    std::array<double, 4> main_poly{};  // a0, a1, a2, a3
    bool has_fit = false;
    double fit_lo_frac = 0.0;
    double fit_hi_frac = 0.0;

    double prefix_at(std::uint64_t n) const { return n == 0 ? 0.0 : prefix[n]; }
};

d4_table build_d4(std::uint64_t limit);

// Least squares of prefix against {n log^3 n, n log^2 n, n log n, n} over
// [lo_frac*N, hi_frac*N].  The basis is orthogonalized (centered, scaled
// log powers) before solving; near-collinearity of the raw basis otherwise
// destroys the solve.
std::array<double, 4> fit_main_term(d4_table& table, double lo_frac = 0.5,
                                    double hi_frac = 1.0);

double d4_main_term(const d4_table& table, double x);

double delta4(const d4_table& table, double x);

// Same per-interval Gauss-Legendre harness as the delta1 moments; the main
// term varies smoothly inside unit intervals so degree-9 exactness is ample.
// Integration starts at x = 1, where the log main term is defined; the
// omitted [0,1) sliver is O(1) against moments of size X^{2+}.
double moment_delta4(const d4_table& table, int k, double X, int threads = 0);

}  // namespace rslab
