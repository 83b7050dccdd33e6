#include "rslab/error_term.hpp"

#include <cmath>
#include <stdexcept>

#include "rslab/kahan.hpp"

namespace rslab {

c_estimate estimate_C(const coefficient_table& table, std::uint64_t limit) {
    std::uint64_t n_max = limit == 0 ? table.limit : limit;
    if (n_max > table.limit)
        throw std::invalid_argument("estimate_C: limit exceeds the table");
    if (n_max < 10'000)
        throw std::invalid_argument("estimate_C: table too short (need >= 1e4)");

    // argmin_C sum_{N/2<n<=N} (S(n) - C n)^2  =  sum n S(n) / sum n^2
    long double sum_ns = 0.0L, sum_nn = 0.0L;
    for (std::uint64_t n = n_max / 2 + 1; n <= n_max; ++n) {
        auto nd = static_cast<long double>(n);
        sum_ns += nd * static_cast<long double>(table.prefix[n]);
        sum_nn += nd * nd;
    }
    c_estimate est;
    est.value = static_cast<double>(sum_ns / sum_nn);
    est.difference = (table.prefix[n_max] - table.prefix[n_max / 2]) /
                     (static_cast<double>(n_max) / 2.0);
    est.uncertainty = std::fabs(est.value - est.difference);
    return est;
}

error_term_model::error_term_model(std::shared_ptr<const coefficient_table> table, double C,
                                   double C_uncertainty, int /*threads*/)
    : table_(std::move(table)), C_(C), C_uncertainty_(C_uncertainty) {
    const std::uint64_t n_max = table_->limit;
    delta1_prefix_.assign(n_max + 1, 0.0);
    // Over [n-1, n) delta is linear, so its integral is
    // S(n-1) - C(n - 1/2) exactly.
    kahan_accumulator acc;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        acc.add(table_->prefix_at(n - 1) - C_ * (static_cast<double>(n) - 0.5));
        delta1_prefix_[n] = acc.value();
    }
}

double error_term_model::delta(double x) const {
    if (!(x >= 0.0) || x > static_cast<double>(limit()))
        throw std::invalid_argument("delta: x outside [0, limit]");
    auto n = static_cast<std::uint64_t>(std::floor(x));
    return table_->prefix_at(n) - C_ * x;
}

double error_term_model::delta1(double x) const {
    if (!(x >= 0.0) || x > static_cast<double>(limit()))
        throw std::invalid_argument("delta1: x outside [0, limit]");
    auto n = static_cast<std::uint64_t>(std::floor(x));
    if (n == limit()) return delta1_prefix_[n];
    double s = x - static_cast<double>(n);
    double v0 = table_->prefix_at(n) - C_ * static_cast<double>(n);
    return delta1_prefix_[n] + v0 * s - C_ * s * s / 2.0;
}

error_term_model build_error_term_model(std::shared_ptr<const coefficient_table> table,
                                        int threads) {
    c_estimate est = estimate_C(*table);
    return {std::move(table), est.value, est.uncertainty, threads};
}

window_average window_average_check(const error_term_model& model, double X, double H) {
    if (!(H >= 1.0) || !(H <= X / 2.0))
        throw std::invalid_argument("window_average_check: need 1 <= H <= X/2");
    if (X + H > static_cast<double>(model.limit()))
        throw std::invalid_argument("window_average_check: X + H beyond table");
    window_average w;
    w.direct = model.delta(X);
    w.averaged = (model.delta1(X + H) - model.delta1(X - H)) / (2.0 * H);
    w.ratio = std::fabs(w.direct - w.averaged) / H;
    return w;
}

}  // namespace rslab
