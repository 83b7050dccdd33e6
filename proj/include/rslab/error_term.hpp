#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rslab/coefficients.hpp"

namespace rslab {

// Two data-driven estimators for the mean-value constant of the prefix sums:
// a least-squares fit of prefix(n) ~ C n over the top half of the table and
// an endpoint difference quotient.  Their disagreement is the reported
// uncertainty.
struct c_estimate {
    double value = 0.0;        // least-squares estimator
    double difference = 0.0;   // (S(N) - S(N/2)) / (N/2)
    double uncertainty = 0.0;  // |value - difference|
};

c_estimate estimate_C(const coefficient_table& table, std::uint64_t limit = 0);

// Piecewise-exact model of the error terms
//   delta(x)  = prefix(floor(x)) - C x           (right-continuous at jumps)
//   delta1(x) = integral of delta over [0, x]    (piecewise quadratic)
// delta1 is maintained through exact per-interval closed forms accumulated
// with compensated summation, never through quadrature.
class error_term_model {
public:
    error_term_model(std::shared_ptr<const coefficient_table> table, double C,
                     double C_uncertainty, int threads = 0);

    double delta(double x) const;
    double delta1(double x) const;

    std::uint64_t limit() const { return table_->limit; }
    double C() const { return C_; }
    double C_uncertainty() const { return C_uncertainty_; }
    const coefficient_table& table() const { return *table_; }
    double delta1_prefix(std::uint64_t n) const { return delta1_prefix_[n]; }

private:
    std::shared_ptr<const coefficient_table> table_;
    double C_;
    double C_uncertainty_;
    std::vector<double> delta1_prefix_;
};

// Builds the model with the least-squares estimate of C.
error_term_model build_error_term_model(std::shared_ptr<const coefficient_table> table,
                                        int threads = 0);

// Short-interval averaging check: compares delta(X) against its window
// average over [X-H, X+H]; ratio is |difference| / H.
struct window_average {
    double direct = 0.0;
    double averaged = 0.0;
    double ratio = 0.0;
};

window_average window_average_check(const error_term_model& model, double X, double H);

}  // namespace rslab
