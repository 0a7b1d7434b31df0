#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <set>

#include "doctest.h"
#include "isoprime/arith.hpp"
#include "isoprime/characters.hpp"
#include "isoprime/error.hpp"

using namespace isoprime;
using namespace isoprime::characters;

namespace {

std::complex<double> e(double t) { return std::polar(1.0, 2 * std::numbers::pi * t); }

std::vector<u64> divisors(u64 k) {
    std::vector<u64> out;
    for (u64 d = 1; d <= k; ++d)
        if (k % d == 0) out.push_back(d);
    return out;
}

// Plain sum of chi(n) e(mn/k), no bucketing.
std::complex<double> brute_gauss(u64 d, u64 f, u64 m, const DirichletCharacter& chi, u64 k) {
    std::complex<double> s = 0;
    for (u64 n = 1; n <= k; ++n) {
        if (n % d != f % d || std::gcd(n, k) != 1) continue;
        s += chi(n) * e(static_cast<double>(m * n % k) / static_cast<double>(k));
    }
    return s;
}

}  // namespace

TEST_CASE("character group examples") {
    const CharacterGroup g1(1);
    CHECK(g1.size() == 1);
    CHECK(g1.principal().is_principal());

    const CharacterGroup g5(5);
    CHECK(g5.size() == 4);
    int real_nonprincipal = 0;
    for (const auto& chi : g5.all()) {
        if (chi.is_principal()) continue;
        bool real = true;
        for (u64 n = 1; n < 5; ++n) real = real && std::abs(chi(n).imag()) < 1e-12;
        real_nonprincipal += real;
    }
    CHECK(real_nonprincipal == 1);

    const CharacterGroup g8(8);
    CHECK(g8.size() == 4);
    for (const auto& chi : g8.all()) CHECK(chi.order() <= 2);  // C2 x C2

    CHECK_THROWS_AS(CharacterGroup(0), DomainError);
    CHECK_THROWS_AS(CharacterGroup(20'000), ResourceError);
}

TEST_CASE("characters are distinct, multiplicative and closed under products") {
    for (u64 k : {1ULL, 2ULL, 9ULL, 12ULL, 16ULL, 27ULL, 40ULL, 63ULL, 64ULL, 105ULL}) {
        const CharacterGroup G(k);
        const auto all = G.all();
        CHECK(all.size() == euler_phi(k));
        CHECK(all.front().is_principal());
        int principals = 0;
        for (const auto& chi : all) principals += chi.is_principal();
        CHECK(principals == 1);
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(all[i].same_values(all[j], k));
        for (const auto& chi : all) {
            for (u64 a = 1; a <= k; ++a)
                for (u64 b = 1; b <= k; ++b) {
                    if (std::gcd(a, k) != 1 || std::gcd(b, k) != 1) continue;
                    CHECK(std::abs(chi(a * b % k) - chi(a) * chi(b)) < 1e-12);
                }
            if (k > 1) CHECK(std::abs(chi(k)) == 0.0);
            CHECK(G.exponent() % chi.order() == 0);
        }
        for (const auto& a : all)
            for (const auto& b : all) {
                const auto c = a * b;
                bool found = false;
                for (const auto& x : all) found = found || x.same_values(c, k);
                CHECK(found);
            }
        for (const auto& chi : all) CHECK((chi * chi.conj()).is_principal());
    }
}

TEST_CASE("orthogonality over all characters for k <= 200") {
    for (u64 k = 1; k <= 200; ++k) {
        const auto all = CharacterGroup(k).all();
        for (u64 n = 0; n < k; ++n) {
            std::complex<double> s = 0;
            for (const auto& chi : all) s += chi(n);
            const double expect = (n % k == 1 % k) ? static_cast<double>(euler_phi(k)) : 0.0;
            if (std::abs(s - expect) > 1e-9) FAIL_CHECK("orthogonality fails at k=" << k << " n=" << n);
        }
    }
}

TEST_CASE("conductor examples") {
    const CharacterGroup g6(6);
    CHECK(conductor(g6.principal()).g_star == 1);
    const CharacterGroup g5(5);
    for (const auto& chi : g5.all()) {
        if (chi.is_principal() || chi.order() != 2) continue;
        const auto c = conductor(chi);
        CHECK(c.g_star == 5);
        REQUIRE(c.primitive.has_value());
        CHECK(c.primitive->same_values(chi, 5));
    }
    for (const auto& chi : g6.all()) {
        if (chi.is_principal()) continue;
        const auto c = conductor(chi);
        CHECK(c.g_star == 3);
        REQUIRE(c.primitive.has_value());
        CHECK(c.primitive->modulus() == 3);
        CHECK(c.primitive->same_values(chi, 6));
    }
}

TEST_CASE("conductor divides k and the inducing character matches") {
    for (u64 k = 1; k <= 60; ++k)
        for (const auto& chi : CharacterGroup(k).all()) {
            const auto c = conductor(chi);
            CHECK(k % c.g_star == 0);
            REQUIRE(c.primitive.has_value());
            CHECK(c.primitive->same_values(chi, k));
            CHECK(conductor(*c.primitive).g_star == c.g_star);
        }
}

TEST_CASE("gauss_sum examples") {
    const CharacterGroup g5(5);
    CHECK(std::abs(gauss_sum(1, 1, 1, g5.principal(), 5) - std::complex<double>(-1, 0)) < 1e-12);
    for (const auto& chi : g5.all())
        if (!chi.is_principal() && chi.order() == 2) CHECK(std::abs(gauss_sum(1, 1, 1, chi, 5)) == doctest::Approx(std::sqrt(5.0)));
    // d = k leaves the single term n = f.
    const CharacterGroup g7(7);
    for (const auto& chi : g7.all())
        CHECK(std::abs(gauss_sum(7, 3, 2, chi, 7) - chi(3) * e(6.0 / 7)) < 1e-12);
    CHECK_THROWS_AS(gauss_sum(3, 1, 1, g5.principal(), 10), DomainError);
    CHECK_THROWS_AS(gauss_sum(2, 1, 1, CharacterGroup(3).principal(), 10), DomainError);
}

TEST_CASE("gauss_sum agrees with plain summation") {
    for (u64 k : {12ULL, 30ULL, 36ULL, 45ULL})
        for (u64 g : divisors(k))
            for (const auto& chi : CharacterGroup(g).all())
                for (u64 d : divisors(k))
                    for (u64 f = 1; f <= d; ++f) {
                        if (std::gcd(f, d) != 1) continue;
                        for (u64 m : {u64{1}, u64{7}, k - 1})
                            CHECK(std::abs(gauss_sum(d, f, m, chi, k) - brute_gauss(d, f, m, chi, k)) < 1e-9);
                    }
}

TEST_CASE("principal closed form examples") {
    CHECK(std::abs(principal_gauss_closed_form(2, 1, 1, 4)) == 0.0);
    CHECK(std::abs(principal_gauss_closed_form(2, 3, 3, 4)) == 0.0);
    CHECK(std::abs(principal_gauss_closed_form(1, 1, 1, 5) - std::complex<double>(-1, 0)) < 1e-12);
    const auto v = principal_gauss_closed_form(7, 2, 3, 7);
    CHECK(std::abs(v - e(6.0 / 7)) < 1e-12);
    CHECK(std::abs(v - gauss_sum(7, 2, 3, CharacterGroup(7).principal(), 7)) < 1e-12);
    CHECK_THROWS_AS(principal_gauss_closed_form(3, 1, 1, 10), DomainError);
    CHECK_THROWS_AS(principal_gauss_closed_form(1, 1, 2, 10), DomainError);
}

TEST_CASE("principal closed form equals direct summation for k <= 60") {
    for (u64 k = 1; k <= 60; ++k) {
        const auto chi0 = CharacterGroup(k).principal();
        for (u64 d : divisors(k))
            for (u64 f = 1; f <= k; ++f) {
                if (std::gcd(f, k) != 1) continue;
                for (u64 m = 1; m <= k; ++m) {
                    if (std::gcd(m, k) != 1) continue;
                    const auto diff = principal_gauss_closed_form(d, f, m, k) - gauss_sum(d, f, m, chi0, k);
                    if (std::abs(diff) > 1e-9) FAIL_CHECK("k=" << k << " d=" << d << " f=" << f << " m=" << m);
                }
            }
    }
}

TEST_CASE("|G| <= sqrt(g*) for k <= 40") {
    for (u64 k = 1; k <= 40; ++k)
        for (u64 g : divisors(k))
            for (const auto& chi : CharacterGroup(g).all()) {
                const double lim = std::sqrt(static_cast<double>(conductor(chi).g_star)) + 1e-9;
                for (u64 d : divisors(k))
                    for (u64 f = 1; f <= k; ++f) {
                        if (std::gcd(f, k) != 1) continue;
                        for (u64 m = 1; m <= k; ++m) {
                            if (std::gcd(m, k) != 1) continue;
                            if (std::abs(gauss_sum(d, f, m, chi, k)) > lim)
                                FAIL_CHECK("k=" << k << " g=" << g << " chi=" << chi.index() << " d=" << d << " f=" << f
                                                << " m=" << m);
                        }
                    }
            }
}

TEST_CASE("gcd_split examples") {
    const auto s = gcd_split(12, 18);
    CHECK(s.h == 6);
    CHECK(s.h1 == 3);
    CHECK(s.h2 == 2);
    CHECK(std::gcd(12 / s.h1, 18 / s.h2) == 1);
    const auto c = gcd_split(35, 12);
    CHECK((c.h == 1 && c.h1 == 1 && c.h2 == 1));
    const auto t = gcd_split(60, 60);
    CHECK((t.h == 60 && t.h1 == 60 && t.h2 == 1));
    CHECK_THROWS_AS(gcd_split(0, 5), DomainError);
}

TEST_CASE("gcd_split identities for r, q <= 500") {
    for (u64 r = 1; r <= 500; ++r)
        for (u64 q = 1; q <= 500; ++q) {
            const auto s = gcd_split(r, q);
            const bool ok = s.h == std::gcd(r, q) && s.h1 * s.h2 == s.h && std::gcd(s.h1, s.h2) == 1 &&
                            std::gcd(r / s.h1, q / s.h2) == 1;
            if (!ok) FAIL_CHECK("gcd_split fails at r=" << r << " q=" << q);
        }
}

TEST_CASE("unit_root reduces its angle") {
    CHECK(std::abs(unit_root(1, 4) - std::complex<double>(0, 1)) < 1e-15);
    CHECK(std::abs(unit_root(-1, 4) - std::complex<double>(0, -1)) < 1e-15);
    CHECK(std::abs(unit_root(1'000'000'001, 1'000'000'000) - unit_root(1, 1'000'000'000)) < 1e-15);
}
