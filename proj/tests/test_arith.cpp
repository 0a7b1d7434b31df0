#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "isoprime/arith.hpp"
#include "isoprime/error.hpp"

using namespace isoprime;

namespace {

bool trial_division_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Plain Eratosthenes, independent of the segmented sieve.
std::vector<u64> simple_sieve(u64 n) {
    std::vector<char> comp(n + 1, 0);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

}  // namespace

TEST_CASE("sieve_primes small bounds") {
    auto t = sieve_primes(10);
    CHECK(std::vector<u64>(t.primes().begin(), t.primes().end()) == std::vector<u64>{2, 3, 5, 7});
    auto t2 = sieve_primes(2);
    REQUIRE(t2.size() == 1);
    CHECK(t2[0] == 2);
    CHECK_THROWS_AS(sieve_primes(1), DomainError);
}

TEST_CASE("sieve_primes to 10^6 agrees with a second sieve and trial division") {
    auto t = sieve_primes(1'000'000);
    CHECK(t.size() == 78498);
    const auto ref = simple_sieve(1'000'000);
    CHECK(std::vector<u64>(t.primes().begin(), t.primes().end()) == ref);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10'000; ++i) {
        const u64 n = rng() % 1'000'000;
        CHECK(t.is_prime(n) == trial_division_prime(n));
    }
}

TEST_CASE("sieve prefix property") {
    auto a = sieve_primes(5'000);
    auto b = sieve_primes(200'000);
    REQUIRE(a.size() <= b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("prime table queries") {
    auto t = sieve_primes(300);
    CHECK(t.prev_prime(211) == 199u);
    CHECK(t.next_prime(211) == 223u);
    CHECK_FALSE(t.prev_prime(2).has_value());
    CHECK(t.count_upto(100) == 25);
    CHECK_THROWS_AS(t.is_prime(301), CoverageError);
    CHECK_THROWS_AS(t.next_prime(293), CoverageError);
    auto r = t.range(100, 110);
    CHECK(std::vector<u64>(r.begin(), r.end()) == std::vector<u64>{101, 103, 107, 109});
}

TEST_CASE("for_each_prime streams the same primes") {
    std::vector<u64> seen;
    for_each_prime(999'000, 1'001'000, [&](u64 p) { seen.push_back(p); });
    auto t = sieve_primes(1'001'000);
    auto ref = t.range(999'000, 1'001'000);
    CHECK(seen == std::vector<u64>(ref.begin(), ref.end()));
}

TEST_CASE("is_prime_u64") {
    CHECK(is_prime_u64((u64{1} << 61) - 1));
    CHECK_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime_u64(1));
    for (u64 n = 0; n < 5000; ++n) CHECK(is_prime_u64(n) == trial_division_prime(n));
}

TEST_CASE("factorize") {
    CHECK(factorize(1).factors.empty());
    using F = std::vector<std::pair<u64, unsigned>>;
    CHECK(factorize(360).factors == F{{2, 3}, {3, 2}, {5, 1}});
    const u64 m61 = (u64{1} << 61) - 1;
    CHECK(factorize(m61).factors == F{{m61, 1}});
    CHECK_THROWS_AS(factorize(0), DomainError);
    // Semiprime of two ~31-bit primes forces the rho path.
    const u64 semi = 2147483647ULL * 2147483629ULL;
    CHECK(factorize(semi).factors == F{{2147483629ULL, 1}, {2147483647ULL, 1}});
}

TEST_CASE("factorize multiplies back for random n <= 10^9") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const u64 n = 1 + rng() % 1'000'000'000;
        const auto f = factorize(n);
        CHECK(f.product() == n);
        for (std::size_t j = 0; j < f.factors.size(); ++j) {
            CHECK(trial_division_prime(f.factors[j].first));
            if (j > 0) CHECK(f.factors[j - 1].first < f.factors[j].first);
        }
    }
}

TEST_CASE("von_mangoldt") {
    CHECK(von_mangoldt(1) == 0.0);
    CHECK(von_mangoldt(8) == doctest::Approx(std::log(2.0)));
    CHECK(von_mangoldt(12) == 0.0);
    CHECK_THROWS_AS(von_mangoldt(0), DomainError);
    const auto tab = von_mangoldt_table(1000);
    for (u64 n = 1; n <= 1000; ++n) CHECK(tab[n] == doctest::Approx(von_mangoldt(n)));
}

TEST_CASE("sum of Lambda is log lcm(1..x)") {
    for (u64 x : {10ULL, 100ULL, 1000ULL, 10'000ULL}) {
        const auto tab = von_mangoldt_table(x);
        double s = 0;
        BigNat prod = 1;
        for (u64 n = 2; n <= x; ++n) {
            if (tab[n] == 0) continue;
            s += tab[n];
            prod *= BigNat(static_cast<u64>(std::llround(std::exp(tab[n]))));
        }
        const auto l = lcm_upto(x);
        CHECK(prod == l);
        CHECK(s == doctest::Approx(l.log()).epsilon(1e-12));
    }
}

TEST_CASE("phi and mu") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(36) == 12);
    CHECK(mobius(1) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    for (u64 n = 1; n <= 300; ++n) {
        u64 phi = 0;
        for (u64 k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
        CHECK(euler_phi(n) == phi);
    }
}

TEST_CASE("modular helpers") {
    CHECK(inv_mod(3, 7) == 5);
    CHECK_THROWS_AS(inv_mod(6, 9), DomainError);
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(mul_mod(~u64{0} - 1, ~u64{0} - 1, ~u64{0}) == 1);
}

TEST_CASE("BigNat") {
    const auto a = BigNat::from_decimal("123456789012345678901234567890");
    CHECK(a.to_decimal() == "123456789012345678901234567890");
    CHECK(a.decimal_digits() == 30);
    CHECK((a - a) == BigNat(0));
    CHECK_THROWS_AS(BigNat(1) - BigNat(2), DomainError);
    CHECK_THROWS(BigNat::from_decimal("12x"));
    u64 rem = 0;  // schoolbook remainder of the decimal string
    for (char c : std::string("123456789012345678901234567890")) rem = (rem * 10 + static_cast<u64>(c - '0')) % 97;
    CHECK(a.mod(97) == rem);
    CHECK(gcd(BigNat(210), BigNat(143)) == BigNat(1));
    CHECK(gcd(BigNat(210), BigNat(213)) == BigNat(3));
    CHECK(pow(BigNat(10), 20) == BigNat::from_decimal("100000000000000000000"));
    CHECK(iroot(BigNat::from_decimal("1000000000000000000000"), 3) == BigNat(10'000'000));
    CHECK(iroot(BigNat(26), 3) == BigNat(2));
    CHECK(lcm_upto(10) == BigNat(2520));
}

TEST_CASE("crt_solve") {
    const Congruence c1[] = {{1, 3}, {2, 5}};
    CHECK(crt_solve(c1) == BigNat(7));
    // Exhaustive oracle over 0..14.
    for (u64 v = 0; v < 15; ++v)
        if (v % 3 == 1 && v % 5 == 2) CHECK(v == 7);
    const Congruence c2[] = {{0, 2}};
    CHECK(crt_solve(c2) == BigNat(0));
    const u64 r = 143;
    const Congruence c3[] = {{r % 2, 2}, {r % 3, 3}, {r % 5, 5}, {r % 7, 7}};
    CHECK(crt_solve(c3) == BigNat(143 % 210));
    const Congruence bad[] = {{1, 4}, {1, 3}, {1, 6}};
    try {
        crt_solve(bad);
        FAIL("expected ConflictError");
    } catch (const ConflictError& e) {
        CHECK(e.first == 4);
        CHECK(e.second == 6);
    }
    const Congruence out_of_range[] = {{5, 5}};
    CHECK_THROWS_AS(crt_solve(out_of_range), DomainError);
}

TEST_CASE("crt_solve reproduces every residue") {
    std::mt19937_64 rng(3);
    const auto primes = sieve_primes(2000);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Congruence> cs;
        BigNat prod = 1;
        for (std::size_t i = 0; i < primes.size(); i += 1 + rng() % 7) {
            cs.push_back({rng() % primes[i], primes[i]});
            prod *= BigNat(primes[i]);
        }
        const auto v = crt_solve(cs);
        CHECK(v < prod);
        for (const auto& c : cs) CHECK(v.mod(c.modulus) == c.residue);
    }
}

TEST_CASE("iterated_log") {
    CHECK(iterated_log(std::exp(1.0), 1) == doctest::Approx(1.0));
    CHECK(iterated_log(1e6, 2) == doctest::Approx(std::log(std::log(1e6))));
    CHECK(iterated_log(1e6, 2) == doctest::Approx(2.6259).epsilon(1e-4));
    CHECK(iterated_log(1e6, 4) == 1.0);
    CHECK_THROWS_AS(iterated_log(0, 1), DomainError);
    CHECK_THROWS_AS(iterated_log(-1, 2), DomainError);
}

TEST_CASE("Mertens sum stays within 3 of log x") {
    const u64 top = 10'000'000;
    const auto t = sieve_primes(top);
    double s = 0;
    std::size_t i = 0;
    double worst = 0;
    // Check at every prime and just before the next one, where the gap peaks.
    for (u64 x = 100; x <= top;) {
        while (i < t.size() && t[i] <= x) {
            s += std::log(static_cast<double>(t[i])) / static_cast<double>(t[i]);
            ++i;
        }
        const u64 next = i < t.size() ? t[i] : top + 1;
        for (u64 probe : {x, std::min(top, next - 1)})
            worst = std::max(worst, std::abs(s - std::log(static_cast<double>(probe))));
        x = next;
    }
    CHECK(worst <= 3.0);
}
