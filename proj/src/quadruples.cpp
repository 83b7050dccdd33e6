#include "rslab/quadruples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rslab/errors.hpp"
#include "rslab/parallel.hpp"

namespace rslab {

namespace {

constexpr std::uint64_t kBruteLimit = 64;
constexpr std::uint64_t kSortedLimit = 4096;  // N^2 pair sums must fit memory

void validate(std::uint64_t n, int k_root, double delta) {
    if (n < 1) throw std::invalid_argument("quadruples: N must be >= 1");
    if (k_root < 2) throw std::invalid_argument("quadruples: k must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("quadruples: delta must be > 0");
}

std::vector<double> roots_in_range(std::uint64_t n, int k_root) {
    std::vector<double> r(n);
    for (std::uint64_t j = 0; j < n; ++j)
        r[j] = std::pow(static_cast<double>(n + 1 + j), 1.0 / k_root);
    return r;
}

double window_width(std::uint64_t n, int k_root, double delta) {
    return delta * std::pow(static_cast<double>(n), 1.0 / k_root);
}

double bound_value(std::uint64_t n, double delta) {
    auto nd = static_cast<double>(n);
    return nd * nd * nd * nd * delta + nd * nd;
}

// The one floating-point predicate shared by both counters: strict window
// membership of the difference of two pair sums.
inline bool in_window(double sp, double sq, double w) { return std::fabs(sp - sq) < w; }

}  // namespace

pair_sum_table build_pair_sums(std::uint64_t n, int k_root, int threads) {
    if (n < 1) throw std::invalid_argument("build_pair_sums: N must be >= 1");
    if (k_root < 2) throw std::invalid_argument("build_pair_sums: k must be >= 2");
    if (n > kSortedLimit)
        throw limit_error("build_pair_sums: N^2 pair sums would exceed the memory guard");

    auto roots = roots_in_range(n, k_root);

    struct entry {
        double sum;
        std::uint32_t id;
        std::uint8_t mult;
    };
    const std::uint64_t m_count = n * (n + 1) / 2;
    std::vector<entry> entries(m_count);

    // Unordered pairs a <= b with multiplicity; IEEE addition is commutative
    // so the ordered enumeration would produce the identical sum values.
    for_chunks(n, kReductionChunks, threads, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t a = begin; a < end; ++a) {
            // row offset of pairs (a, b >= a) in the triangular layout
            std::uint64_t base = a * n - a * (a + 1) / 2 + a;
            for (std::uint64_t b = a; b < n; ++b) {
                entries[base + (b - a)] = {
                    roots[a] + roots[b],
                    static_cast<std::uint32_t>((a << 16) | b),
                    static_cast<std::uint8_t>(a == b ? 1 : 2),
                };
            }
        }
    });
    std::sort(entries.begin(), entries.end(), [](const entry& x, const entry& y) {
        return x.sum != y.sum ? x.sum < y.sum : x.id < y.id;
    });

    pair_sum_table t;
    t.n = n;
    t.k_root = k_root;
    t.sums.resize(m_count);
    t.pair_id.resize(m_count);
    t.mult.resize(m_count);
    for (std::uint64_t i = 0; i < m_count; ++i) {
        t.sums[i] = entries[i].sum;
        t.pair_id[i] = entries[i].id;
        t.mult[i] = entries[i].mult;
    }
    // Relative guard band 2^-40 against the largest sum magnitude.
    t.band = std::ldexp(2.0 * std::pow(2.0 * static_cast<double>(n), 1.0 / k_root), -40);
    return t;
}

quadruple_count count_from_sums(const pair_sum_table& t, double delta) {
    validate(t.n, t.k_root, delta);
    const double w = window_width(t.n, t.k_root, delta);
    const std::uint64_t m_count = t.sums.size();

    std::vector<std::uint64_t> mult_prefix(m_count + 1, 0);
    for (std::uint64_t i = 0; i < m_count; ++i)
        mult_prefix[i + 1] = mult_prefix[i] + t.mult[i];

    quadruple_count res;
    res.n = t.n;
    res.k_root = t.k_root;
    res.delta = delta;
    res.bound_value = bound_value(t.n, delta);

    if (w <= t.band) {
        // The window is below the float guard band, so the strict comparison
        // cannot be trusted against rounding collisions; only pairs with a
        // provably zero difference (equal integer multisets) are counted.
        for (std::uint64_t p = 0; p < m_count; ++p)
            res.count += static_cast<std::uint64_t>(t.mult[p]) * t.mult[p];
    } else {
        // Sliding window over the sorted sums; both boundaries use the shared
        // strict predicate on the subtracted values.
        std::uint64_t lo = 0, hi = 0;
        for (std::uint64_t p = 0; p < m_count; ++p) {
            while (lo < m_count && !in_window(t.sums[p], t.sums[lo], w)) ++lo;
            if (hi < lo) hi = lo;
            while (hi < m_count && in_window(t.sums[p], t.sums[hi], w)) ++hi;
            res.count +=
                static_cast<std::uint64_t>(t.mult[p]) * (mult_prefix[hi] - mult_prefix[lo]);
        }
    }

    // Guard-band audit: sums closer than the band must come from the same
    // integer multiset; anything else is an anomaly, logged not hidden.
    for (std::uint64_t p = 0; p + 1 < m_count; ++p) {
        for (std::uint64_t q = p + 1; q < m_count && t.sums[q] - t.sums[p] <= t.band; ++q) {
            if (t.pair_id[p] != t.pair_id[q]) ++res.anomalies;
        }
    }
    return res;
}

quadruple_count count_sorted(std::uint64_t n, int k_root, double delta, int threads) {
    validate(n, k_root, delta);
    return count_from_sums(build_pair_sums(n, k_root, threads), delta);
}

quadruple_count count_bruteforce(std::uint64_t n, int k_root, double delta) {
    validate(n, k_root, delta);
    if (n > kBruteLimit)
        throw limit_error("count_bruteforce: N exceeds the O(N^4) guard");

    auto roots = roots_in_range(n, k_root);
    const double w = window_width(n, k_root, delta);

    // All ordered pair sums, same floating-point values as the sorted path.
    std::vector<double> sums;
    sums.reserve(n * n);
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) sums.push_back(roots[a] + roots[b]);

    quadruple_count res;
    res.n = n;
    res.k_root = k_root;
    res.delta = delta;
    res.bound_value = bound_value(n, delta);
    const double band = std::ldexp(2.0 * std::pow(2.0 * static_cast<double>(n), 1.0 / k_root), -40);
    if (w <= band) {
        // Sub-band window: count by multiset equality, as in the sorted path.
        std::vector<std::uint32_t> ids;
        ids.reserve(n * n);
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                ids.push_back(static_cast<std::uint32_t>((std::min(a, b) << 16) | std::max(a, b)));
        for (std::uint32_t p : ids)
            for (std::uint32_t q : ids)
                if (p == q) ++res.count;
    } else {
        for (double sp : sums)
            for (double sq : sums)
                if (in_window(sp, sq, w)) ++res.count;
    }

    // Band audit over unordered pairs a <= b, mirrored from the sorted path.
    std::vector<std::pair<double, std::uint32_t>> uniq;
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = a; b < n; ++b)
            uniq.emplace_back(roots[a] + roots[b], static_cast<std::uint32_t>((a << 16) | b));
    for (std::size_t p = 0; p < uniq.size(); ++p)
        for (std::size_t q = p + 1; q < uniq.size(); ++q)
            if (std::fabs(uniq[p].first - uniq[q].first) <= band &&
                uniq[p].second != uniq[q].second)
                ++res.anomalies;
    return res;
}

bound_ratio_scan_result bound_ratio_scan(std::span<const std::uint64_t> n_list,
                                         std::span<const double> delta_list, int k_root,
                                         int threads) {
    if (n_list.empty() || delta_list.empty())
        throw std::invalid_argument("bound_ratio_scan: empty parameter list");

    bound_ratio_scan_result out;
    for (std::uint64_t n : n_list) {
        auto sums = build_pair_sums(n, k_root, threads);
        for (double delta : delta_list) {
            auto qc = count_from_sums(sums, delta);
            double ratio = static_cast<double>(qc.count) / qc.bound_value;
            out.rows.push_back({n, delta, qc.count, qc.bound_value, ratio});
            out.max_ratio = std::max(out.max_ratio, ratio);
            out.total_anomalies += qc.anomalies;
        }
    }
    return out;
}

}  // namespace rslab
