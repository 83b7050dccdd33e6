#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rslab/coefficients.hpp"

using namespace rslab;

namespace {
const tau_table& shared_tau() {
    static tau_table t = build_tau_table(20'000);
    return t;
}
const coefficient_table& shared_coeffs() {
    static coefficient_table t = build_coefficient_table(shared_tau());
    return t;
}
}  // namespace

TEST_CASE("sigma tables match direct divisor enumeration") {
    auto s1 = build_sigma_tables(1);
    CHECK(s1.sigma3[1] == 1);
    CHECK(s1.sigma5[1] == 1);

    auto s = build_sigma_tables(500);
    CHECK(s.sigma3[2] == 9);
    CHECK(s.sigma5[2] == 33);
    CHECK(s.sigma3[6] == 252);  // 1 + 8 + 27 + 216
    for (std::uint64_t n = 1; n <= 500; ++n) {
        CHECK(s.sigma3[n] == oracles::sigma_direct(n, 3));
        CHECK(s.sigma5[n] == oracles::sigma_direct(n, 5));
    }
}

TEST_CASE("sigma limit guard") {
    CHECK_THROWS_AS(build_sigma_tables(3'000'000), limit_error);
    CHECK_THROWS_AS(build_sigma_tables(0), std::invalid_argument);
}

TEST_CASE("tau values against the q-expansion oracle") {
    const auto& tau = shared_tau();
    CHECK(tau.tau[1] == 1);
    CHECK(tau.tau[2] == -24);
    CHECK(tau.tau[3] == 252);
    CHECK(tau.tau[6] == -6048);
    CHECK(tau.tau[6] == tau.tau[2] * tau.tau[3]);

    auto oracle = oracles::tau_qexpansion(64);
    for (std::uint64_t n = 1; n <= 64; ++n) CHECK(tau.tau[n] == oracle[n]);

    // Known initial segment, frozen.
    const std::int64_t first[] = {1,      -24,    252,     -1472,  4830,    -6048,
                                  -16744, 84480,  -113643, -115920, 534612, -370944};
    for (std::uint64_t n = 1; n <= 12; ++n)
        CHECK(tau.tau[n] == static_cast<int128>(first[n - 1]));
}

TEST_CASE("tau values against the Eisenstein route") {
    auto sig = build_sigma_tables(600);
    auto oracle = oracles::tau_eisenstein(600, sig.sigma3, sig.sigma5);
    const auto& tau = shared_tau();
    for (std::uint64_t n = 1; n <= 600; ++n) CHECK(tau.tau[n] == oracle[n]);
}

TEST_CASE("tau hard limit guard") {
    CHECK_THROWS_AS(build_tau_table(kTauHardLimit + 1), limit_error);
    CHECK_THROWS_AS(build_tau_table(0), std::invalid_argument);
}

TEST_CASE("Hecke multiplicativity and prime-power recursion hold exactly") {
    const auto& tau = shared_tau();
    const std::uint64_t n_max = tau.limit;

    for (std::uint64_t m = 2; m <= 140; ++m) {
        for (std::uint64_t n = m + 1; m * n <= n_max; ++n) {
            if (std::gcd(m, n) != 1) continue;
            CHECK(tau.tau[m * n] == checked_mul(tau.tau[m], tau.tau[n]));
        }
    }

    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
        int128 p11 = 1;
        for (int i = 0; i < 11; ++i) p11 *= static_cast<int128>(p);
        std::uint64_t pk = p, pk1 = p * p;  // p^k, p^{k+1}
        std::uint64_t pkm1 = 1;
        while (pk1 <= n_max) {
            CHECK(tau.tau[pk1] ==
                  checked_mul(tau.tau[p], tau.tau[pk]) - checked_mul(p11, tau.tau[pkm1]));
            pkm1 = pk;
            pk = pk1;
            if (pk1 > n_max / p) break;
            pk1 *= p;
        }
    }
}

TEST_CASE("Deligne bound") {
    const auto& tau = shared_tau();
    const auto& table = shared_coeffs();
    for (std::uint64_t n = 1; n <= tau.limit; ++n) {
        double bound = static_cast<double>(oracles::divisor_count(n)) *
                       std::pow(static_cast<double>(n), 5.5);
        CHECK(std::fabs(to_long_double(tau.tau[n])) <= bound * (1.0 + 1e-12));
    }
    // |lambda(p)| <= 2 at primes
    for (std::uint64_t p = 2; p <= tau.limit; ++p) {
        if (oracles::divisor_count(p) != 2) continue;
        CHECK(std::fabs(table.lambda[p]) <= 2.0);
    }
}

TEST_CASE("lambda is the correctly rounded quotient at dyadic points") {
    const auto& table = shared_coeffs();
    CHECK(table.lambda[1] == 1.0);
    CHECK(table.lambda[4] == -0.71875);  // -1472 / 2^11, exactly representable
    CHECK(table.lambda[2] == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-15));
}

TEST_CASE("c values: first entries and multiplicativity") {
    const auto& table = shared_coeffs();
    CHECK(table.c[1] == 1.0);
    CHECK(table.c[2] == doctest::Approx(0.28125).epsilon(1e-14));  // lambda(2)^2 = 576/2048
    CHECK(table.c[4] == doctest::Approx(1.5166015625).epsilon(1e-14));  // lambda(4)^2 + 1

    for (std::uint64_t n = 1; n <= table.limit; ++n) {
        CHECK(table.c[n] >= table.lambda[n] * table.lambda[n]);
        CHECK(table.c[n] >= 0.0);
    }

    for (std::uint64_t m = 2; m <= 60; ++m) {
        for (std::uint64_t n = m + 1; m * n <= table.limit && n <= 300; ++n) {
            if (std::gcd(m, n) != 1) continue;
            double prod = table.c[m] * table.c[n];
            CHECK(std::fabs(table.c[m * n] - prod) <= 1e-9 * prod);
        }
    }
}

TEST_CASE("prefix sums are nondecreasing with compensated increments") {
    const auto& table = shared_coeffs();
    for (std::uint64_t n = 2; n <= table.limit; ++n) {
        CHECK(table.prefix[n] >= table.prefix[n - 1]);
        double incr = table.prefix[n] - table.prefix[n - 1];
        CHECK(std::fabs(incr - table.c[n]) <= std::ldexp(table.prefix[n], -40));
    }
    CHECK(table.prefix[1] == 1.0);
}

TEST_CASE("rebuilding with a smaller limit is prefix-identical") {
    auto small_tau = build_tau_table(1000);
    auto small = build_coefficient_table(small_tau);
    const auto& big = shared_coeffs();
    for (std::uint64_t n = 1; n <= 1000; ++n) {
        CHECK(small_tau.tau[n] == shared_tau().tau[n]);
        CHECK(small.lambda[n] == big.lambda[n]);
        CHECK(small.c[n] == big.c[n]);
        CHECK(small.prefix[n] == big.prefix[n]);
    }
}

TEST_CASE("tau build is bit-identical across worker counts") {
    auto t1 = build_tau_table(20'000, 1);
    auto t3 = build_tau_table(20'000, 3);
    for (std::uint64_t n = 1; n <= 20'000; ++n) CHECK(t1.tau[n] == t3.tau[n]);
}

TEST_CASE("series constant B") {
    // Synthetic: only c_1 = 1 nonzero.
    coefficient_table synth;
    synth.limit = 2000;
    synth.lambda.assign(2001, 0.0);
    synth.c.assign(2001, 0.0);
    synth.prefix.assign(2001, 1.0);
    synth.c[1] = 1.0;
    synth.prefix[0] = 0.0;
    auto b = series_constant_B(synth);
    CHECK(b.value == 1.0);
    CHECK(b.tail_bound == 0.0);
    CHECK(b.terms_used == 2000);

    // Monotone in the limit on the real table.
    auto t3 = build_coefficient_table(build_tau_table(1000));
    auto t4 = build_coefficient_table(build_tau_table(10'000));
    CHECK(series_constant_B(t3).value <= series_constant_B(t4).value);

    coefficient_table tiny;
    tiny.limit = 100;
    CHECK_THROWS_AS(series_constant_B(tiny), std::invalid_argument);
}

TEST_CASE("series constant stabilizes within its tail bound") {
    auto table = build_coefficient_table(build_tau_table(100'000));
    auto b_small = series_constant_B(table, 10'000);
    auto b_large = series_constant_B(table);
    CHECK(b_small.value <= b_large.value);  // nonnegative terms
    CHECK(std::fabs(b_large.value - b_small.value) <= b_small.tail_bound);
    CHECK_THROWS_AS(series_constant_B(table, 200'000), std::invalid_argument);
}
