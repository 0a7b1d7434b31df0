#pragma once

// g-isolated primes: every m != p with |p - m| <= log(p) g(p) is composite.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isoprime/arith.hpp"

namespace isoprime::isolation {

/// Growth function g. `window` is not a g in the strict sense: it fixes the
/// threshold log(p) g(p) to a constant half-length L.
struct GFunction {
    enum class Kind { constant, rankin, ford, window };

    Kind kind = Kind::constant;
    double c = 1.0;

    static GFunction constant(double value) { return {Kind::constant, value}; }
    static GFunction rankin(double C) { return {Kind::rankin, C}; }
    static GFunction ford(double C) { return {Kind::ford, C}; }
    static GFunction window(double half_length) { return {Kind::window, half_length}; }

    /// Parses "const:L" (window), "g:c" (constant), "rankin:C", "ford:C".
    static GFunction parse(std::string_view spec);
    std::string to_string() const;
};

/// g(p) with clamped iterated logs. Throws DomainError for p < 3.
double g_value(const GFunction& g, double p);

/// Window half-length log(p) g(p); p = 2 is evaluated as p = 3.
double threshold(const GFunction& g, u64 p);

struct IsolationReport {
    u64 p = 0;
    u64 radius = 0;
    double threshold = 0;
    bool isolated = false;
};

/// Largest L with every m != p, 0 < m, |p - m| <= L non-prime (m = 1 counts as
/// composite). Throws DomainError if p is not prime and CoverageError if the
/// table does not reach next_prime(p).
u64 isolation_radius(u64 p, const PrimeTable& table);

IsolationReport is_isolated(u64 p, const GFunction& g, const PrimeTable& table);

/// One report per prime in [lo, hi], ascending. Streams through a segmented
/// sieve, so memory does not grow with the range.
void scan_isolated(u64 lo, u64 hi, const GFunction& g, const std::function<void(const IsolationReport&)>& emit);
std::vector<IsolationReport> scan_isolated(u64 lo, u64 hi, const GFunction& g);

struct Triple {
    u64 p1 = 0, p2 = 0, p3 = 0;
};

/// Precomputes the isolated primes below `limit` once so many N can be
/// searched against the same g.
class TwoIsolatedFinder {
public:
    TwoIsolatedFinder(u64 limit, const GFunction& g, const PrimeTable& table);

    /// N = p1 + p2 + p3 with p1 <= p2 isolated, p3 prime; first hit in
    /// ascending (p1, p2) order. Throws DomainError for even N or N < 9.
    std::optional<Triple> find(u64 N) const;

    const std::vector<u64>& isolated_primes() const { return isolated_; }

private:
    u64 limit_;
    const PrimeTable* table_;
    std::vector<u64> isolated_;
};

std::optional<Triple> find_two_isolated_rep(u64 N, const GFunction& g, const PrimeTable& table);

}  // namespace isoprime::isolation
