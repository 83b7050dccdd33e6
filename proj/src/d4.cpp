#include "rslab/d4.hpp"

#include <cmath>
#include <stdexcept>

#include "rslab/errors.hpp"
#include "rslab/kahan.hpp"
#include "rslab/parallel.hpp"

namespace rslab {

namespace {

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

// out(n) = sum_{d | n} f(d), the standard O(N log N) divisor sieve.
std::vector<std::uint64_t> convolve_with_ones(const std::vector<std::uint64_t>& f) {
    const std::uint64_t n_max = f.size() - 1;
    std::vector<std::uint64_t> out(n_max + 1, 0);
    for (std::uint64_t d = 1; d <= n_max; ++d) {
        if (f[d] == 0) continue;
        for (std::uint64_t m = d; m <= n_max; m += d) out[m] += f[d];
    }
    return out;
}

}  // namespace

d4_table build_d4(std::uint64_t limit) {
    if (limit < 1) throw std::invalid_argument("build_d4: limit must be >= 1");
    if (limit > (std::uint64_t{1} << 32))
        throw limit_error("build_d4: allocation guard exceeded");

    std::vector<std::uint64_t> ones(limit + 1, 1);
    ones[0] = 0;
    auto d2 = convolve_with_ones(ones);
    auto d3 = convolve_with_ones(d2);

    d4_table t;
    t.limit = limit;
    t.d4 = convolve_with_ones(d3);
    t.prefix.assign(limit + 1, 0.0);
    kahan_accumulator acc;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        acc.add(static_cast<double>(t.d4[n]));
        t.prefix[n] = acc.value();
    }
    return t;
}

std::array<double, 4> fit_main_term(d4_table& table, double lo_frac, double hi_frac) {
    if (table.limit < 100'000)
        throw std::invalid_argument("fit_main_term: table too short (need >= 1e5)");
    if (!(lo_frac >= 0.0) || !(lo_frac < hi_frac) || !(hi_frac <= 1.0))
        throw std::invalid_argument("fit_main_term: bad window fractions");

    const auto lo = static_cast<std::uint64_t>(lo_frac * static_cast<double>(table.limit)) + 1;
    const auto hi = static_cast<std::uint64_t>(hi_frac * static_cast<double>(table.limit));

    // Orthogonalized basis: powers of u = (log n - mean) / sd.  The raw
    // n log^k n columns are nearly collinear over a half-table window.
    long double mean_l = 0.0L;
    std::uint64_t count = hi - lo + 1;
    for (std::uint64_t n = lo; n <= hi; ++n) mean_l += logl(static_cast<long double>(n));
    mean_l /= static_cast<long double>(count);
    long double var_l = 0.0L;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        long double d = logl(static_cast<long double>(n)) - mean_l;
        var_l += d * d;
    }
    long double sd_l = sqrtl(var_l / static_cast<long double>(count));

    // Normal equations for prefix(n) ~ n * sum_p b_p u^p, in long double.
    long double G[4][4] = {};
    long double rhs[4] = {};
    for (std::uint64_t n = lo; n <= hi; ++n) {
        long double nd = static_cast<long double>(n);
        long double u = (logl(nd) - mean_l) / sd_l;
        long double col[4] = {nd, nd * u, nd * u * u, nd * u * u * u};
        long double y = static_cast<long double>(table.prefix[n]);
        for (int i = 0; i < 4; ++i) {
            rhs[i] += col[i] * y;
            for (int j = i; j < 4; ++j) G[i][j] += col[i] * col[j];
        }
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) G[i][j] = G[j][i];

    // Cholesky with a conditioning check on the pivots.
    long double L[4][4] = {};
    long double pivot_min = 0.0L, pivot_max = 0.0L;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            long double s = G[i][j];
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s <= 0.0L) throw std::runtime_error("fit_main_term: basis is collinear");
                L[i][i] = sqrtl(s);
                if (i == 0) pivot_min = pivot_max = L[0][0];
                pivot_min = std::min(pivot_min, L[i][i]);
                pivot_max = std::max(pivot_max, L[i][i]);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    if (pivot_min / pivot_max < 1e-14L)
        throw std::runtime_error("fit_main_term: basis nearly collinear after orthogonalization");

    long double z[4], b[4];
    for (int i = 0; i < 4; ++i) {
        long double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= L[i][k] * z[k];
        z[i] = s / L[i][i];
    }
    for (int i = 3; i >= 0; --i) {
        long double s = z[i];
        for (int k = i + 1; k < 4; ++k) s -= L[k][i] * b[k];
        b[i] = s / L[i][i];
    }

    // Expand sum_p b_p ((L - mu)/sd)^p back to powers of L = log n.
    long double a[4] = {};
    for (int p = 0; p < 4; ++p) {
        // ((L - mu)/sd)^p = sd^{-p} sum_q binom(p,q) L^q (-mu)^{p-q}
        long double binom = 1.0L;
        for (int q = 0; q <= p; ++q) {
            long double term = b[p] * binom * powl(-mean_l, p - q) / powl(sd_l, p);
            a[q] += term;
            binom = binom * static_cast<long double>(p - q) / static_cast<long double>(q + 1);
        }
    }

    table.main_poly = {static_cast<double>(a[0]), static_cast<double>(a[1]),
                       static_cast<double>(a[2]), static_cast<double>(a[3])};
    table.has_fit = true;
    table.fit_lo_frac = lo_frac;
    table.fit_hi_frac = hi_frac;
    return table.main_poly;
}

double d4_main_term(const d4_table& table, double x) {
    if (!table.has_fit) throw std::logic_error("d4_main_term: main term not fitted");
    double l = std::log(x);
    const auto& a = table.main_poly;
    return x * (((a[3] * l + a[2]) * l + a[1]) * l + a[0]);
}

double delta4(const d4_table& table, double x) {
    if (!(x >= 1.0) || x > static_cast<double>(table.limit))
        throw std::invalid_argument("delta4: x outside [1, limit]");
    return table.prefix_at(static_cast<std::uint64_t>(std::floor(x))) - d4_main_term(table, x);
}

double moment_delta4(const d4_table& table, int k, double X, int threads) {
    if (k != 2 && k != 4) throw std::invalid_argument("moment_delta4: k must be 2 or 4");
    if (!(X >= 1.0) || X > static_cast<double>(table.limit))
        throw std::invalid_argument("moment_delta4: X outside [1, limit]");
    if (!table.has_fit) throw std::logic_error("moment_delta4: main term not fitted");

    const auto full = static_cast<std::uint64_t>(std::floor(X));
    std::vector<kahan_accumulator> partial(kReductionChunks);
    // Intervals [n, n+1) for n = 1 .. full-1; [0, 1) is excluded because the
    // log main term is defined from x = 1.
    const std::uint64_t n_intervals = full - 1;
    for_chunks(n_intervals, kReductionChunks, threads,
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   kahan_accumulator acc;
                   for (std::uint64_t i = begin; i < end; ++i) {
                       std::uint64_t n = i + 1;
                       double p = table.prefix[n];
                       for (int g = 0; g < 5; ++g) {
                           double x = static_cast<double>(n) + kGL5Nodes[g];
                           double val = p - d4_main_term(table, x);
                           double pw = val * val;
                           if (k == 4) pw *= pw;
                           acc.add(kGL5Weights[g] * pw);
                       }
                   }
                   partial[chunk] = acc;
               });
    kahan_accumulator total;
    for (const auto& p : partial) total.merge(p);

    double w = X - static_cast<double>(full);
    if (w > 0.0) {
        double p = table.prefix[full];
        for (int g = 0; g < 5; ++g) {
            double x = static_cast<double>(full) + kGL5Nodes[g] * w;
            double val = p - d4_main_term(table, x);
            double pw = val * val;
            if (k == 4) pw *= pw;
            total.add(w * kGL5Weights[g] * pw);
        }
    }
    return total.value();
}

}  // namespace rslab
