#pragma once

// Covering construction of an isolated residue class u0 mod P*.
//
// Pipeline: build_profile -> classify_primes -> select_qstar -> greedy_sift
// -> choose_q0 -> assemble_certificate. verify_certificate reads nothing but
// the certificate.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoprime/arith.hpp"

namespace isoprime::cover {

struct SieveProfile {
    double x = 0;      // scale, x = c1 log N
    double y = 0;      // c2 x log x log_3 x / log_2 x
    double z = 0;      // x^(log_3 x / (4 log_2 x))
    double s_low = 0;  // min(log^20 x, sqrt z)
    double c1 = 0;     // x / log N, recorded once N is known
    double c2 = 1;
    double C0 = 4;     // matching primes live in (x, C0 x]
    BigNat N;
    bool n_from_profile = false;
};

/// Throws DomainError for x < 50 or even N, ProfileError when the chain
/// s_low < z < x/2 < x < y <= C0 x (or N > 2y) fails. Without N, picks the
/// smallest odd N exceeding (prod_{p <= C0 x} p)^1.01.
SieveProfile build_profile(double x, double c2, double C0, std::optional<BigNat> N = std::nullopt);

/// Smallest odd integer strictly greater than base^(101/100).
BigNat smallest_odd_above_power_101_100(const BigNat& base);

struct PrimeClasses {
    std::vector<u64> S;      // (s_low, z]
    std::vector<u64> P_mid;  // (x/2, x]
    std::vector<u64> Q;      // (x, y]
};

PrimeClasses classify_primes(const SieveProfile& profile, const PrimeTable& table);

/// q in Q with y/3 < q <= 2y/3 and no prime factor of N - 2q at or below s_low.
/// Throws ConstructionFailure("qstar") when empty.
std::vector<u64> select_qstar(const SieveProfile& profile, const PrimeTable& table);

struct ResidueSystem {
    std::map<u64, u64> a;        // s in S
    std::map<u64, u64> b;        // p in P_mid
    std::map<u64, u64> matched;  // leftover-matching primes p~ -> n_j mod p~

    /// a_s on S, b_p on P_mid, n_j on matched primes, 0 elsewhere.
    u64 d(u64 p) const;
};

struct SiftResult {
    ResidueSystem system;
    std::vector<u64> q_survivors;  // Q members no a_s / b_p removed
    std::vector<u64> leftover;     // q_survivors plus z-smooth n in (x, y], sorted
};

/// Greedy max-coverage over the survivors of Q: each a_s (S ascending) takes
/// the residue hitting most survivors, smallest residue on ties; then each
/// b_p (P_mid ascending) removes the class of the largest survivor, or 0 if
/// none remain. With restarts > 0 the S order is shuffled by `seed` and the
/// smallest leftover wins.
SiftResult greedy_sift(const SieveProfile& profile, const PrimeClasses& classes, std::uint64_t seed = 0,
                       unsigned restarts = 0);

struct ExcludedSets {
    std::vector<u64> n1;  // s in S: q = a_s, or s | N - 2q + 2a_s
    std::vector<u64> n2;  // p in P_mid: q = b_p, or p | N - 2q + 2b_p
    std::vector<u64> n3;  // s_low < p <= x with p | N - 2q
};

struct Q0Choice {
    u64 q0 = 0;
    ExcludedSets excluded;
    double score = 0;
};

ExcludedSets excluded_sets(u64 q, const ResidueSystem& system, const PrimeClasses& classes,
                           const SieveProfile& profile, const PrimeTable& table);

/// Minimizes sum over excluded primes of (y - x)/p; ties go to the smallest q.
Q0Choice choose_q0(const std::vector<u64>& qstar, const ResidueSystem& system, const PrimeClasses& classes,
                   const SieveProfile& profile, const PrimeTable& table);

struct ResidueEntry {
    u64 p = 0;
    u64 d = 0;
};

/// v0 in [1, prod p) with v0 = -d_p mod p. Throws ConstructionFailure("crt")
/// when the only solution is v0 = 0.
BigNat solve_v0(const std::vector<ResidueEntry>& residues);

struct IsolationCertificate {
    SieveProfile profile;
    u64 q0 = 0;
    ExcludedSets excluded;
    BigNat pstar;
    BigNat v0;
    BigNat u0;
    u64 window = 0;
    std::vector<ResidueEntry> residues;  // one entry per prime factor of P*
    std::vector<std::pair<std::string, std::string>> construction_log;
};

/// Builds P*, v0, u0. Excluded N1/N2 primes fall back to d_p = 0, N3 primes
/// are dropped; each leftover n_j in (x, y] \ {q0} gets the smallest unused
/// prime p~ in (x, C0 x] with p~ not dividing n_j - q0 or N - 2q0 + 2n_j.
/// Throws ConstructionFailure("match") when the range runs out.
IsolationCertificate assemble_certificate(const SieveProfile& profile, ResidueSystem system, const Q0Choice& choice,
                                          const PrimeTable& table);

struct Check {
    std::string name;
    bool pass = false;
    std::string witness;  // counterexample when pass is false
};

struct VerificationReport {
    std::vector<Check> checks;
    u64 verified_radius = 0;

    bool passed() const;
    const Check* find(const std::string& name) const;
};

/// Largest L with gcd(u0 + k, P*) > 1 for all 0 < |k| <= L (u0 - k >= 1).
u64 measure_radius(const BigNat& u0, const BigNat& pstar, u64 cap = 10'000'000);

/// Independent checker; never throws on a bad certificate.
VerificationReport verify_certificate(const IsolationCertificate& cert);

struct ConstructionResult {
    IsolationCertificate certificate;
    PrimeClasses classes;
    SiftResult sift;
    std::vector<u64> qstar;
    Q0Choice choice;
};

/// Full pipeline for a profile; table must reach max(y, C0 x).
ConstructionResult construct(const SieveProfile& profile, const PrimeTable& table, std::uint64_t seed = 0);

}  // namespace isoprime::cover
