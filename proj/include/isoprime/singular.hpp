#pragma once

// The coefficient f(r, q, a, b) and the singular series sigma(N; r) of the
// ternary problem with n_i = b_i (mod r), computed two independent ways.

#include <complex>
#include <cstdint>

#include "isoprime/arith.hpp"

namespace isoprime::singular {

struct FCoefficient {
    u64 r = 1, q = 1, a = 1, b = 0;
    std::complex<double> value;
};

/// h = gcd(r, q): 0 if gcd(q/h, h) > 1, else mu(q/h)/phi(rq/h) e(abt/h)
/// with t (q/h) = 1 (mod h). Needs gcd(a, q) = gcd(b, r) = 1.
FCoefficient f_coeff(u64 r, u64 q, u64 a, u64 b);

struct Residues {
    u64 b1 = 0, b2 = 0, b3 = 0;
};

struct SingularSeriesValue {
    u64 N = 0;
    u64 r = 1;
    Residues b;
    bool compatible = false;  // b1 + b2 + b3 = N (mod r)
    double qsum = 0;
    double qsum_imag = 0;
    u64 qsum_truncation = 0;
    std::size_t qsum_terms = 0;  // number of (q, a) pairs summed
    double local_product = 0;
    u64 local_prime_bound = 0;
};

/// sum_{q <= Qmax} sum_{(a,q)=1} f(r,q,a,b1) f(r,q,a,b2) f(r,q,a,b3) e(-aN/q).
/// Each q is summed directly over a with a long double twiddle recurrence;
/// blocks of q run in parallel and are reduced in block order.
SingularSeriesValue sigma_qsum(u64 N, u64 r, Residues b, u64 Qmax);

/// The same partial sum with the inner a-sum replaced by the Ramanujan sum
/// c_q(M) = mu(q/g) phi(q)/phi(q/g), g = gcd(q, M). Real by construction.
double sigma_qsum_ramanujan(u64 N, u64 r, Residues b, u64 Qmax);

/// The same partial sum evaluated literally as three f_coeff calls per (q, a).
/// Quadratic in Qmax; meant for small cross-checks.
std::complex<double> sigma_qsum_literal(u64 N, u64 r, Residues b, u64 Qmax);

/// Local density at p: p^e #{unit triples mod p^e, u_i = b_i (mod p^e),
/// sum = N} / phi(p^e)^3 when p^e || r, and p #{unit triples mod p with
/// sum = N} / (p-1)^3 when p does not divide r.
double local_factor(u64 p, u64 N, u64 r, Residues b);

/// Exhaustive triple count behind local_factor for p not dividing r.
u64 count_unit_triples(u64 p, u64 N);

/// Product of local_factor over p <= prime_bound (and every p | r). Counts
/// exhaustively below 1000; above that the count is (p-1)^3 - c_p(N) over p,
/// which the exhaustive count reproduces on every prime where both run.
SingularSeriesValue sigma_local(u64 N, u64 r, Residues b, u64 prime_bound);

/// Both evaluations in one record.
SingularSeriesValue singular_series(u64 N, u64 r, Residues b, u64 Qmax, u64 prime_bound);

/// For p | N (p not dividing r): the closed-form Euler factor quoted for the
/// series, next to the local density that counting mod p gives.
struct PrintedFactorComparison {
    u64 p = 0;
    double printed = 0;  // (1 + 1/(p-1)^3) (p-1)((p-1)^2+1)/((p-1)^3+1)
    double counted = 0;  // local_factor(p, N = p, r = 1)
};

PrintedFactorComparison compare_printed_factor(u64 p);

struct TailEstimate {
    u64 P = 0;
    double bound = 0;     // r^2.1 / phi(r)^3 / P
    double measured = 0;  // |sigma_qsum(2P) - sigma_qsum(P)|
};

/// r^2.1 / phi(r)^3 / P. Throws DomainError for P < 2.
double tail_bound(u64 r, u64 P);

TailEstimate tail_estimate(u64 N, u64 r, Residues b, u64 P);

}  // namespace isoprime::singular
