#pragma once

// Smooth-number counts, Dickman rho, the survivor trichotomy of the covering
// sieve, and empirical Brun-Titchmarsh checks.

#include <cstdint>

#include "isoprime/arith.hpp"
#include "isoprime/cover.hpp"

namespace isoprime::smooth {

struct SmoothCount {
    double x = 0, y = 0, z = 0;
    u64 count = 0;
    double estimate = 0;  // y * rho(log y / log z)
};

/// #{n in (x, y] : every prime factor of n is <= z}, by a segmented
/// divide-out sieve. Requires 0 <= x < y, z >= 2; y > 1e9 throws ResourceError.
SmoothCount count_smooth(double x, double y, double z);

/// True when every prime factor of n is <= z (n >= 1).
bool is_smooth(u64 n, u64 z);

/// Dickman rho. 1 on [0,1], 1 - log u on [1,2], the integral form of the delay equation
/// u rho(u) = int_{u-1}^u rho integrated on a 1e-4 grid beyond; 0 for u > 20.
double dickman_rho(double u);

enum class SurvivorKind { sifted, in_q, in_r, lemma_violation };

struct SurvivorClass {
    SurvivorKind kind = SurvivorKind::sifted;
    u64 sifting_prime = 0;  // set when kind == sifted
};

/// Trichotomy for n in (x, y]: sifted by the first p <= x with n = d_p (mod p),
/// else prime (in Q), else z-smooth (in R). Anything else is a lemma_violation.
SurvivorClass classify_survivor(u64 n, const cover::ResidueSystem& system, const cover::SieveProfile& profile,
                                const PrimeTable& table);

struct BrunTitchmarsh {
    u64 count = 0;
    double bound = 0;
    bool pass = false;
};

/// pi(w; r, b) against 2w / (phi(r) log(w/r)). Requires 1 <= r < w and
/// gcd(b, r) = 1; throws DomainError otherwise.
BrunTitchmarsh brun_titchmarsh_check(u64 w, u64 r, u64 b, const PrimeTable& table);

struct BrunTitchmarshSweep {
    u64 cases = 0;       // (r, b, w) evaluations
    u64 violations = 0;
    double worst_ratio = 0;  // max count / bound
    u64 worst_w = 0, worst_r = 0, worst_b = 0;
};

/// Every w in (r, w_max], every r <= r_max, every b coprime to r. The bound
/// is unimodal in w, so checking both ends of each constant stretch of
/// pi(w; r, b) and the turning point w = e r covers all w.
BrunTitchmarshSweep brun_titchmarsh_sweep(u64 w_max, u64 r_max, const PrimeTable& table);

}  // namespace isoprime::smooth
