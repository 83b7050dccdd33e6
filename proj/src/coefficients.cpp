#include "rslab/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "rslab/kahan.hpp"
#include "rslab/parallel.hpp"

namespace rslab {

namespace {

// Jacobi's identity: prod_{m>=1}(1-q^m)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}.
// O(sqrt(degree)) nonzero terms; the whole 24th power is reached from here.
struct sparse_term {
    std::uint64_t offset;
    std::int64_t coef;
};

std::vector<sparse_term> eta_cube_terms(std::uint64_t max_degree) {
    std::vector<sparse_term> terms;
    for (std::uint64_t k = 0;; ++k) {
        std::uint64_t off = k * (k + 1) / 2;
        if (off > max_degree) break;
        auto c = static_cast<std::int64_t>(2 * k + 1);
        terms.push_back({off, (k & 1) ? -c : c});
    }
    return terms;
}

// One dense*sparse convolution pass, truncated at max_degree.  If the input
// magnitudes are provably too small to overflow, the inner loop runs raw
// int128 arithmetic; otherwise every operation is overflow-checked.  Either
// way a wraparound can never go unnoticed.
void convolve_sparse(const std::vector<int128>& in, const std::vector<sparse_term>& terms,
                     std::vector<int128>& out, int threads) {
    const std::uint64_t n = in.size();
    int128 max_abs = 0;
    for (int128 v : in) {
        int128 a = abs128(v);
        if (a > max_abs) max_abs = a;
    }
    int128 coef_abs_sum = 0;
    for (const auto& t : terms) coef_abs_sum += abs128(t.coef);
    const bool fast = max_abs <= int128_max() / (2 * coef_abs_sum);

    for_chunks(n, kReductionChunks, threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        if (fast) {
            for (std::uint64_t i = begin; i < end; ++i) {
                int128 acc = 0;
                for (const auto& t : terms) {
                    if (t.offset > i) break;
                    acc += static_cast<int128>(t.coef) * in[i - t.offset];
                }
                out[i] = acc;
            }
        } else {
            for (std::uint64_t i = begin; i < end; ++i) {
                int128 acc = 0;
                for (const auto& t : terms) {
                    if (t.offset > i) break;
                    acc = checked_add(acc, checked_mul(t.coef, in[i - t.offset]));
                }
                out[i] = acc;
            }
        }
    });
}

}  // namespace

sigma_tables build_sigma_tables(std::uint64_t limit) {
    if (limit < 1) throw std::invalid_argument("build_sigma_tables: limit must be >= 1");
    // Guard on the crude bound sigma_5(n) <= n^6.
    int128 pow6 = 1;
    bool fits = true;
    for (int i = 0; i < 6 && fits; ++i) {
        if (pow6 > int128_max() / static_cast<int128>(limit)) fits = false;
        else pow6 *= static_cast<int128>(limit);
    }
    if (!fits) throw limit_error("build_sigma_tables: sigma_5 may overflow 128 bits at this limit");

    sigma_tables s;
    s.limit = limit;
    s.sigma3.assign(limit + 1, 0);
    s.sigma5.assign(limit + 1, 0);
    for (std::uint64_t d = 1; d <= limit; ++d) {
        int128 d3 = static_cast<int128>(d) * d * d;
        int128 d5 = d3 * d * d;
        for (std::uint64_t m = d; m <= limit; m += d) {
            s.sigma3[m] += d3;
            s.sigma5[m] += d5;
        }
    }
    return s;
}

tau_table build_tau_table(std::uint64_t limit, int threads) {
    if (limit < 1) throw std::invalid_argument("build_tau_table: limit must be >= 1");
    if (limit > kTauHardLimit)
        throw limit_error("build_tau_table: limit exceeds the 128-bit safety guard");

    // tau(n) is the coefficient of q^{n-1} in prod(1-q^m)^24, so series run
    // over degrees 0..limit-1.
    const std::uint64_t deg = limit - 1;
    auto terms = eta_cube_terms(deg);

    std::vector<int128> cur(limit, 0), nxt(limit, 0);
    for (const auto& t : terms) cur[t.offset] = t.coef;  // eta^3

    for (int pass = 0; pass < 7; ++pass) {  // eta^6, ..., eta^24
        convolve_sparse(cur, terms, nxt, threads);
        cur.swap(nxt);
    }

    tau_table out;
    out.limit = limit;
    out.tau.assign(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) out.tau[n] = cur[n - 1];
    return out;
}

coefficient_table build_coefficient_table(const tau_table& tau, double weight) {
    if (tau.limit < 1) throw std::invalid_argument("build_coefficient_table: empty tau table");
    const std::uint64_t n_max = tau.limit;

    coefficient_table t;
    t.limit = n_max;
    t.weight = weight;
    t.lambda.assign(n_max + 1, 0.0);
    t.c.assign(n_max + 1, 0.0);
    t.prefix.assign(n_max + 1, 0.0);

    // lambda(n) = tau(n) / n^{(weight-1)/2}, evaluated in long double so the
    // rounded double is within 1 ulp of the exact quotient.
    const long double half_exp = (static_cast<long double>(weight) - 1.0L) / 2.0L;
    const bool integral_half = weight == 12.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        long double num = to_long_double(tau.tau[n]);
        long double den;
        if (integral_half) {
            long double nd = static_cast<long double>(n);
            den = nd * nd * nd * nd * nd * sqrtl(nd);  // n^5 * sqrt(n) = n^{11/2}
        } else {
            den = powl(static_cast<long double>(n), half_exp);
        }
        t.lambda[n] = static_cast<double>(num / den);
    }

    // c(n) = sum_{m^2 | n} lambda(n/m^2)^2, sieved over m ascending so each
    // cell accumulates in a fixed order.
    for (std::uint64_t m = 1; m * m <= n_max; ++m) {
        const std::uint64_t mm = m * m;
        for (std::uint64_t j = 1; j * mm <= n_max; ++j)
            t.c[j * mm] += t.lambda[j] * t.lambda[j];
    }

    kahan_accumulator acc;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        acc.add(t.c[n]);
        t.prefix[n] = acc.value();
    }
    return t;
}

series_constant series_constant_B(const coefficient_table& table, std::uint64_t limit) {
    const std::uint64_t n_max = limit == 0 ? table.limit : limit;
    if (n_max > table.limit)
        throw std::invalid_argument("series_constant_B: limit exceeds the table");
    if (n_max < 1000)
        throw std::invalid_argument("series_constant_B: table too short for the tail model");

    kahan_accumulator acc;
    for (std::uint64_t n = 1; n <= n_max; ++n)
        acc.add(table.c[n] * table.c[n] * std::pow(static_cast<double>(n), -1.75));

    // Tail model: mean of c^2 over the top decade times int_N^inf t^{-7/4} dt.
    kahan_accumulator win;
    std::uint64_t win_lo = n_max / 10 + 1;
    for (std::uint64_t n = win_lo; n <= n_max; ++n) win.add(table.c[n] * table.c[n]);
    double mean_c2 = win.value() / static_cast<double>(n_max - win_lo + 1);
    double tail = (4.0 / 3.0) * std::pow(static_cast<double>(n_max), -0.75) * mean_c2;

    return {acc.value(), tail, n_max};
}

}  // namespace rslab
