#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "isoprime/arith.hpp"
#include "isoprime/error.hpp"
#include "isoprime/isolation.hpp"

using namespace isoprime;
using isolation::GFunction;

namespace {

bool td_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Widen the window until some m != p in it is prime; m = 1 and m <= 0 do not count.
u64 td_radius(u64 p) {
    u64 L = 0;
    for (;;) {
        const u64 k = L + 1;
        if (td_prime(p + k) || (p > k && td_prime(p - k))) return L;
        ++L;
    }
}

const PrimeTable& table() {
    static const PrimeTable t = sieve_primes(200'000);
    return t;
}

}  // namespace

TEST_CASE("g_value") {
    CHECK(isolation::g_value(GFunction::constant(5), 1e4) == 5.0);
    CHECK(isolation::g_value(GFunction::ford(1), 1e6) == doctest::Approx(std::log(std::log(1e6))));
    CHECK(isolation::g_value(GFunction::ford(1), 1e6) == doctest::Approx(2.6259).epsilon(1e-4));
    CHECK(isolation::g_value(GFunction::rankin(1), 1e6) == doctest::Approx(2.6259).epsilon(1e-4));
    CHECK_THROWS_AS(isolation::g_value(GFunction::ford(1), 2), DomainError);
}

TEST_CASE("g-spec parsing") {
    auto g = GFunction::parse("ford:0.1");
    CHECK(g.kind == GFunction::Kind::ford);
    CHECK(g.c == 0.1);
    CHECK(GFunction::parse("const:9").kind == GFunction::Kind::window);
    CHECK(GFunction::parse("g:2").kind == GFunction::Kind::constant);
    CHECK(GFunction::parse("rankin:1").to_string() == "rankin:1");
    CHECK_THROWS_AS(GFunction::parse("ford"), DomainError);
    CHECK_THROWS_AS(GFunction::parse("ford:x"), DomainError);
    CHECK_THROWS_AS(GFunction::parse("weird:1"), DomainError);
    CHECK_THROWS_AS(GFunction::parse("g:-1"), DomainError);
}

TEST_CASE("isolation_radius examples") {
    CHECK(isolation::isolation_radius(3, table()) == 0);
    CHECK(isolation::isolation_radius(211, table()) == 11);
    CHECK(isolation::isolation_radius(5, table()) == 1);
    CHECK(isolation::isolation_radius(2, table()) == 0);
    CHECK_THROWS_AS(isolation::isolation_radius(15, table()), DomainError);
    const auto small = sieve_primes(100);
    CHECK_THROWS_AS(isolation::isolation_radius(97, small), CoverageError);
}

TEST_CASE("isolation_radius matches trial division below 10^5") {
    for (u64 p : table().range(2, 100'000)) {
        if (isolation::isolation_radius(p, table()) != td_radius(p)) {
            FAIL_CHECK("radius mismatch at " << p);
        }
    }
}

TEST_CASE("is_isolated thresholds") {
    CHECK(isolation::is_isolated(211, GFunction::window(11), table()).isolated);
    CHECK_FALSE(isolation::is_isolated(211, GFunction::window(12), table()).isolated);
    // Constant g with log(211) g = 11.
    CHECK(isolation::is_isolated(211, GFunction::constant(11 / std::log(211.0) - 1e-12), table()).isolated);
    CHECK_FALSE(isolation::is_isolated(3, GFunction::constant(1), table()).isolated);
}

TEST_CASE("raising the threshold never creates isolation") {
    for (u64 p : table().range(3, 20'000)) {
        bool prev = true;
        for (double L = 0; L <= 30; L += 0.5) {
            const bool iso = isolation::is_isolated(p, GFunction::window(L), table()).isolated;
            CHECK((prev || !iso));
            prev = iso;
        }
    }
}

TEST_CASE("scan_isolated examples") {
    std::vector<u64> hits;
    for (const auto& r : isolation::scan_isolated(200, 300, GFunction::window(9)))
        if (r.isolated) hits.push_back(r.p);
    CHECK(hits == std::vector<u64>{211, 293});

    for (const auto& r : isolation::scan_isolated(2, 10, GFunction::constant(1))) CHECK_FALSE(r.isolated);
    CHECK(isolation::scan_isolated(300, 200, GFunction::window(9)).empty());
}

TEST_CASE("scan_isolated emits one report per prime and splits cleanly") {
    const auto g = GFunction::ford(0.1);
    const auto whole = isolation::scan_isolated(50'000, 60'000, g);
    CHECK(whole.size() == table().range(50'000, 60'000).size());
    auto left = isolation::scan_isolated(50'000, 55'001, g);
    const auto right = isolation::scan_isolated(55'001, 60'000, g);
    if (!left.empty() && !right.empty() && left.back().p == right.front().p) left.pop_back();
    left.insert(left.end(), right.begin(), right.end());
    REQUIRE(left.size() == whole.size());
    for (std::size_t i = 0; i < whole.size(); ++i) {
        CHECK(left[i].p == whole[i].p);
        CHECK(left[i].radius == whole[i].radius);
        CHECK(left[i].isolated == whole[i].isolated);
    }
}

TEST_CASE("ford(0.1) scan above 10^6 matches the golden list") {
    std::ifstream f(std::string(ISOPRIME_FIXTURES) + "/ford_0.1_scan_1e6.csv");
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    std::vector<std::pair<u64, u64>> golden;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string p, r;
        std::getline(ss, p, ',');
        std::getline(ss, r, ',');
        golden.emplace_back(std::stoull(p), std::stoull(r));
    }
    std::vector<std::pair<u64, u64>> got;
    for (const auto& r : isolation::scan_isolated(1'000'000, 1'010'000, GFunction::ford(0.1)))
        if (r.isolated) got.emplace_back(r.p, r.radius);
    CHECK_FALSE(got.empty());
    CHECK(got == golden);
}

TEST_CASE("find_two_isolated_rep") {
    CHECK_FALSE(isolation::find_two_isolated_rep(9, GFunction::window(9), table()).has_value());
    CHECK_THROWS_AS(isolation::find_two_isolated_rep(100, GFunction::ford(0.1), table()), DomainError);

    const auto g = GFunction::ford(0.1);
    const auto t = isolation::find_two_isolated_rep(100'003, g, table());
    REQUIRE(t.has_value());
    CHECK(t->p1 + t->p2 + t->p3 == 100'003);
    CHECK(t->p1 <= t->p2);
    CHECK(td_prime(t->p3));
    for (u64 p : {t->p1, t->p2}) {
        CHECK(td_prime(p));
        CHECK(static_cast<double>(td_radius(p)) >= std::log(static_cast<double>(p)) * isolation::g_value(g, p));
    }
}

TEST_CASE("finder returns the first pair in ascending order") {
    const auto g = GFunction::window(5);
    isolation::TwoIsolatedFinder finder(3001, g, table());
    const auto& iso = finder.isolated_primes();
    for (u64 N = 1001; N <= 3001; N += 2) {
        std::optional<isolation::Triple> expect;
        for (std::size_t i = 0; i < iso.size() && !expect; ++i)
            for (std::size_t j = i; j < iso.size() && !expect; ++j)
                if (iso[i] + iso[j] < N && td_prime(N - iso[i] - iso[j])) expect = {iso[i], iso[j], N - iso[i] - iso[j]};
        const auto got = finder.find(N);
        REQUIRE(got.has_value() == expect.has_value());
        if (got) {
            CHECK(got->p1 == expect->p1);
            CHECK(got->p2 == expect->p2);
        }
    }
}
