#pragma once

// Exponential sums over progressions, the major/minor arc split, the
// character expansion of S(a/q + lambda, r, b), and Lambda-weighted ternary
// representation counts.

#include <complex>
#include <cstdint>
#include <vector>

#include "isoprime/arith.hpp"
#include "isoprime/singular.hpp"

namespace isoprime::circle {

/// S(alpha, r, b) = sum_{n <= N, n = b (r)} Lambda(n) e(n alpha), with
/// Kahan-compensated accumulation.
std::complex<double> exp_sum(double alpha, u64 r, u64 b, u64 N);

/// The same sum at alpha = a/q + lambda; n a mod q is reduced exactly.
std::complex<double> exp_sum_rational(u64 a, u64 q, double lambda, u64 r, u64 b, u64 N);

struct ArcParams {
    u64 N = 0;
    double R_scale = 0;
    double L = 0;       // log N
    double C_exp = 0;
    double p_bound = 0;  // R^3 L^(3C)
    double q_bound = 0;  // N R^-3 L^(-4C)
};

/// From (N, R, C). Throws DomainError unless 2 p_bound < q_bound.
ArcParams make_arc_params(u64 N, double R, double C);

/// Explicit bounds, same invariant.
ArcParams make_arc_params_explicit(u64 N, double p_bound, double q_bound);

struct RationalApprox {
    u64 a = 1, q = 1;
    double lambda = 0;
};

enum class ArcKind { major, minor };

struct ArcClass {
    RationalApprox approx;
    ArcKind kind = ArcKind::minor;
};

/// Continued-fraction approximation with q <= q_bound and |lambda| <= 1/(q
/// q_bound). MAJOR when some convergent with q <= p_bound lies within
/// 1/(q q_bound) of alpha. alpha must lie in [1/q_bound, 1 + 1/q_bound].
ArcClass classify_arc(double alpha, const ArcParams& params);

struct CharacterExpansion {
    std::complex<double> S0;  // both characters principal
    std::complex<double> S1;  // xi principal, eta not
    std::complex<double> S2;  // xi non-principal
    std::complex<double> total() const { return S0 + S1 + S2; }
};

/// Expands S(a/q + lambda, r, b) over characters xi mod r/h1 and eta mod
/// q/h2 with Gauss-sum coefficients G(h, b, a, conj eta, q). Drops the n
/// that share a prime with q, so it matches exp_sum up to O(log^2 N).
/// Throws ResourceError when r q > 10^4.
CharacterExpansion character_expansion(u64 a, u64 q, double lambda, u64 r, u64 b, u64 N);

struct RepCount {
    u64 N = 0;
    u64 r = 1;
    singular::Residues b;
    bool compatible = false;
    double weighted_count = 0;  // sum over n1+n2+n3 = N of Lambda(n1)Lambda(n2)Lambda(n3)
    double sigma = 0;           // sigma_local(N; r)
    double predicted = 0;       // sigma N^2 / 2
};

/// Weighted count by FFT convolution of the progression-masked Lambda arrays.
/// Incompatible residues give an exact zero with compatible = false.
RepCount rep_count_direct(u64 N, u64 r, singular::Residues b, u64 prime_bound = 100'000);

/// O(N^2) summation of the same count, for small N.
double rep_count_naive(u64 N, u64 r, singular::Residues b);

/// int_0^1 S1 S2 S3 e(-N alpha) d alpha by a (3N+1)-point DFT, which is exact
/// for this trigonometric polynomial.
double rep_count_integral(u64 N, u64 r, singular::Residues b);

struct Theorem33Ratio {
    RepCount count;
    double ratio = 0;
    bool flagged = false;  // predicted == 0
};

Theorem33Ratio theorem33_ratio(u64 N, u64 r, singular::Residues b, u64 prime_bound = 100'000);

struct BalogPerelliSample {
    u64 a = 0, q = 1, r = 1, b = 0, M = 0;
};

struct BalogPerelliRow {
    BalogPerelliSample sample;
    double sum_abs = 0;
    double terms[3] = {0, 0, 0};  // L^3 times each bound term
    double bound = 0;
    double ratio = 0;
    int dominant = 0;  // index of the largest term
};

struct BalogPerelliReport {
    std::vector<BalogPerelliRow> rows;
    double max_ratio = 0;
};

/// |sum_{n <= M, n = b (r)} Lambda(n) e(an/q)| against
/// L^3 (hM/(r q^1/2) + q^1/2 M^1/2 / h^1/2 + M^4/5 / r^2/5), h = gcd(r, q).
BalogPerelliReport balog_perelli_probe(const std::vector<BalogPerelliSample>& samples);

}  // namespace isoprime::circle
