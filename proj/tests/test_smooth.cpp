#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "isoprime/arith.hpp"
#include "isoprime/cover.hpp"
#include "isoprime/error.hpp"
#include "isoprime/smooth.hpp"

using namespace isoprime;
using namespace isoprime::smooth;

namespace {

u64 largest_prime_factor(u64 n) {
    u64 big = 1;
    for (u64 d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            big = d;
            n /= d;
        }
    return n > 1 ? n : big;
}

u64 td_smooth_count(u64 lo, u64 hi, u64 z) {
    u64 c = 0;
    for (u64 n = lo + 1; n <= hi; ++n) c += largest_prime_factor(n) <= z;
    return c;
}

// rho on [2, 3] by RK4 on u rho'(u) = -(1 - log(u - 1)).
double rho_rk4(double u) {
    auto f = [](double t) { return -(1 - std::log(t - 1)) / t; };
    const int steps = 20000;
    const double h = (u - 2) / steps;
    double y = 1 - std::log(2.0), t = 2;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(t), k2 = f(t + h / 2), k4 = f(t + h);
        y += h / 6 * (k1 + 4 * k2 + k4);
        t += h;
    }
    return y;
}

}  // namespace

TEST_CASE("count_smooth examples") {
    CHECK(count_smooth(8, 64, 2).count == 3);  // 16, 32, 64
    CHECK(count_smooth(10, 100, 3).count == 13);
    CHECK(count_smooth(100, 1000, 7).count == td_smooth_count(100, 1000, 7));
    CHECK_THROWS_AS(count_smooth(0, 2e9, 7), ResourceError);
    CHECK_THROWS_AS(count_smooth(100, 10, 7), DomainError);
}

TEST_CASE("count_smooth agrees with trial division on random windows") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const u64 lo = rng() % 200'000;
        const u64 hi = lo + 1 + rng() % 5000;
        const u64 z = 2 + rng() % 200;
        CHECK(count_smooth(static_cast<double>(lo), static_cast<double>(hi), static_cast<double>(z)).count ==
              td_smooth_count(lo, hi, z));
    }
}

TEST_CASE("smooth counts split additively") {
    const auto a = count_smooth(1000, 40'000, 31).count;
    const auto b = count_smooth(40'000, 90'000, 31).count;
    CHECK(a + b == count_smooth(1000, 90'000, 31).count);
}

TEST_CASE("is_smooth") {
    CHECK(is_smooth(1, 2));
    CHECK(is_smooth(1024, 2));
    CHECK_FALSE(is_smooth(1026, 2));
    CHECK(is_smooth(7 * 7 * 5, 7));
    CHECK_FALSE(is_smooth(11, 7));
}

TEST_CASE("dickman_rho values") {
    CHECK(dickman_rho(0.5) == 1.0);
    CHECK(dickman_rho(1.0) == doctest::Approx(1.0));
    CHECK(dickman_rho(2.0) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-12));
    CHECK(dickman_rho(3.0) == doctest::Approx(0.0486083882911316).epsilon(1e-6));
    CHECK(rho_rk4(3.0) == doctest::Approx(0.0486083882911316).epsilon(1e-9));
    CHECK(dickman_rho(2.5) == doctest::Approx(rho_rk4(2.5)).epsilon(1e-6));
    CHECK(dickman_rho(25) == 0.0);
}

TEST_CASE("dickman_rho is positive, decreasing and below exp(-u log u + u)") {
    double prev = 1;
    for (double u = 1.05; u <= 20; u += 0.05) {
        const double r = dickman_rho(u);
        CHECK(r < prev);
        CHECK(r > 0);
        if (u >= 2) CHECK(r <= std::exp(-u * std::log(u) + u));
        prev = r;
    }
    // Known values deep in the tail.
    CHECK(dickman_rho(5) == doctest::Approx(3.5472470045e-4).epsilon(1e-5));
    CHECK(dickman_rho(10) == doctest::Approx(2.7701718105e-11).epsilon(1e-5));
}

TEST_CASE("classify_survivor on the desk sieve") {
    const auto table = sieve_primes(5000);
    const auto res = cover::construct(cover::build_profile(300, 1, 4), table);
    const auto& pr = res.certificate.profile;
    const auto& sys = res.sift.system;
    u64 sifted = 0, in_q = 0, in_r = 0, bad = 0;
    for (u64 n = 301; n <= static_cast<u64>(pr.y); ++n) {
        const auto c = classify_survivor(n, sys, pr, table);
        switch (c.kind) {
            case SurvivorKind::sifted:
                ++sifted;
                CHECK(n % c.sifting_prime == sys.d(c.sifting_prime));
                break;
            case SurvivorKind::in_q: ++in_q; break;
            case SurvivorKind::in_r: ++in_r; break;
            case SurvivorKind::lemma_violation: ++bad; break;
        }
    }
    // a_2 = 1 sifts all odd n. The even survivors are 512 and 2q for primes q
    // in (x, y/2]; no p <= x touches 2q, so those land outside the trichotomy.
    const u64 two_q = table.range(301, static_cast<u64>(pr.y) / 2).size();
    MESSAGE("desk survivors: " << in_r << " smooth, " << bad << " lemma violations");
    CHECK(bad == two_q);
    CHECK(in_q == 0);
    CHECK(in_r == res.sift.leftover.size());
    CHECK(in_r < res.classes.P_mid.size());
    CHECK(classify_survivor(512, sys, pr, table).kind == SurvivorKind::in_r);
    CHECK(sifted + in_q + in_r + bad == static_cast<u64>(pr.y) - 300);
    CHECK_THROWS_AS(classify_survivor(300, sys, pr, table), DomainError);
}

TEST_CASE("classify_survivor trichotomy on a toy system") {
    const auto table = sieve_primes(1000);
    cover::SieveProfile pr;
    pr.s_low = 1;
    pr.z = 3;
    pr.x = 5;
    pr.y = 60;
    pr.N = BigNat(1001);
    cover::ResidueSystem sys;  // d = 0 everywhere
    CHECK(classify_survivor(10, sys, pr, table).sifting_prime == 2);
    CHECK(classify_survivor(21, sys, pr, table).sifting_prime == 3);
    CHECK(classify_survivor(7, sys, pr, table).kind == SurvivorKind::in_q);
    CHECK(classify_survivor(37, sys, pr, table).kind == SurvivorKind::in_q);
    CHECK(classify_survivor(7 * 7, sys, pr, table).kind == SurvivorKind::lemma_violation);
}

TEST_CASE("brun_titchmarsh_check") {
    const auto table = sieve_primes(1'000'000);
    const auto a = brun_titchmarsh_check(100, 1, 1, table);
    CHECK(a.count == 25);
    CHECK(a.bound == doctest::Approx(200 / std::log(100.0)));
    CHECK(a.bound == doctest::Approx(43.4).epsilon(1e-3));
    CHECK(a.pass);
    const auto b = brun_titchmarsh_check(1'000'000, 7, 3, table);
    u64 c = 0;
    for (u64 p : table.range(2, 1'000'000)) c += p % 7 == 3;
    CHECK(b.count == c);
    CHECK(b.pass);
    CHECK_THROWS_AS(brun_titchmarsh_check(7, 7, 3, table), DomainError);
    CHECK_THROWS_AS(brun_titchmarsh_check(100, 6, 3, table), DomainError);
    CHECK_THROWS_AS(brun_titchmarsh_check(2'000'000, 7, 3, table), CoverageError);
}

TEST_CASE("brun_titchmarsh_sweep matches pointwise checks") {
    const auto table = sieve_primes(3000);
    const auto sw = brun_titchmarsh_sweep(3000, 12, table);
    CHECK(sw.violations == 0);
    CHECK(sw.cases > 0);
    double worst = 0;
    for (u64 r = 1; r <= 12; ++r)
        for (u64 b = 0; b < r; ++b) {
            if (std::gcd(b, r) != 1) continue;
            for (u64 w = r + 1; w <= 3000; ++w) {
                const auto c = brun_titchmarsh_check(w, r, b, table);
                CHECK(c.pass);
                worst = std::max(worst, static_cast<double>(c.count) / c.bound);
            }
        }
    CHECK(sw.worst_ratio == doctest::Approx(worst).epsilon(1e-12));
}
