#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rslab {

// Count of ordered quadruples (n1,n2,n3,n4) in (N, 2N]^4 with
// |n1^{1/k} + n2^{1/k} - n3^{1/k} - n4^{1/k}| < delta N^{1/k}  (strict).
// Root sums are doubles with a relative guard band of 2^-40.  Windows wider
// than the band use the strict float predicate directly; windows at or below
// the band cannot be resolved in floating point, so only pairs whose integer
// multisets coincide (difference provably zero) are counted.  Every
// band-close pair of distinct multisets is recorded in `anomalies` rather
// than trusted silently.
struct quadruple_count {
    std::uint64_t n = 0;
    int k_root = 4;
    double delta = 0.0;
    std::uint64_t count = 0;
    double bound_value = 0.0;  // N^4 delta + N^2
    std::uint64_t anomalies = 0;
};

// All pair sums r(a) + r(b) over unordered pairs with multiplicity, sorted.
// Built once per N and reused across delta values.
struct pair_sum_table {
    std::uint64_t n = 0;
    int k_root = 4;
    std::vector<double> sums;           // sorted ascending
    std::vector<std::uint32_t> pair_id; // (a-N-1) << 16 | (b-N-1), a <= b
    std::vector<std::uint8_t> mult;     // 1 on the diagonal, 2 off it
    double band = 0.0;                  // absolute guard band
};

pair_sum_table build_pair_sums(std::uint64_t n, int k_root, int threads = 0);

quadruple_count count_from_sums(const pair_sum_table& sums, double delta);

// O(N^4) oracle over the same floating-point sum values and the same strict
// window predicate, so it must agree with the sorted counter exactly.
quadruple_count count_bruteforce(std::uint64_t n, int k_root, double delta);

quadruple_count count_sorted(std::uint64_t n, int k_root, double delta, int threads = 0);

struct bound_ratio_row {
    std::uint64_t n = 0;
    double delta = 0.0;
    std::uint64_t count = 0;
    double bound = 0.0;
    double ratio = 0.0;
};

struct bound_ratio_scan_result {
    std::vector<bound_ratio_row> rows;
    double max_ratio = 0.0;
    std::uint64_t total_anomalies = 0;
};

bound_ratio_scan_result bound_ratio_scan(std::span<const std::uint64_t> n_list,
                                         std::span<const double> delta_list, int k_root,
                                         int threads = 0);

}  // namespace rslab
