#include "isoprime/singular.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "isoprime/characters.hpp"
#include "isoprime/error.hpp"
#include "isoprime/parallel.hpp"

namespace isoprime::singular {

namespace {

constexpr u64 kBlock = 64;
constexpr u64 kExhaustiveBelow = 1000;

void check_residues(u64 r, Residues& b) {
    if (r == 0) throw DomainError("singular series: r must be >= 1");
    b.b1 %= r;
    b.b2 %= r;
    b.b3 %= r;
    for (u64 v : {b.b1, b.b2, b.b3})
        if (std::gcd(v, r) != 1) throw DomainError("singular series: each b_i must be coprime to r");
}

// The pieces of f(r,q,a,b1) f(r,q,a,b2) f(r,q,a,b3) e(-aN/q) that do not
// depend on a: the product equals coef * e(aM/q).
struct QTerm {
    bool zero = true;
    double coef = 0;
    u64 M = 0;
};

QTerm q_term(u64 N, u64 r, const Residues& b, u64 q) {
    QTerm t;
    const u64 h = std::gcd(r, q);
    const u64 qh = q / h;
    if (std::gcd(qh, h) > 1) return t;
    const int mu = mobius(qh);
    if (mu == 0) return t;
    const u64 inv = h == 1 ? 0 : inv_mod(qh % h, h);
    const u64 B = (b.b1 + b.b2 + b.b3) % r;
    const u64 tb = h == 1 ? 0 : mul_mod(inv, B % h, h);
    t.M = (tb * qh % q + q - N % q) % q;
    const double phi = static_cast<double>(euler_phi(r * qh));
    t.coef = mu / (phi * phi * phi);
    t.zero = false;
    return t;
}

std::vector<char> unit_mask(u64 q) {
    std::vector<char> unit(q + 1, 1);
    unit[0] = q == 1;
    for (auto [p, e] : factorize(q).factors)
        for (u64 m = p; m <= q; m += p) unit[m] = 0;
    return unit;
}

}  // namespace

FCoefficient f_coeff(u64 r, u64 q, u64 a, u64 b) {
    if (r == 0 || q == 0) throw DomainError("f_coeff: r, q must be >= 1");
    if (std::gcd(a, q) != 1 || std::gcd(b, r) != 1) throw DomainError("f_coeff: need gcd(a, q) = gcd(b, r) = 1");
    FCoefficient f{r, q, a, b, {0.0, 0.0}};
    const u64 h = std::gcd(r, q);
    const u64 qh = q / h;
    if (std::gcd(qh, h) > 1) return f;
    const int mu = mobius(qh);
    if (mu == 0) return f;
    const u64 t = h == 1 ? 0 : inv_mod(qh % h, h);
    const u64 num = h == 1 ? 0 : mul_mod(mul_mod(a % h, b % h, h), t, h);
    f.value = static_cast<double>(mu) / static_cast<double>(euler_phi(r * qh)) * characters::unit_root(num, h);
    return f;
}

SingularSeriesValue sigma_qsum(u64 N, u64 r, Residues b, u64 Qmax) {
    check_residues(r, b);
    if (Qmax == 0) throw DomainError("sigma_qsum: Qmax must be >= 1");
    const u64 blocks = (Qmax + kBlock - 1) / kBlock;
    std::vector<std::complex<long double>> part(blocks);
    std::vector<std::size_t> terms(blocks, 0);
    parallel_for(blocks, [&](std::size_t blk) {
        std::complex<long double> acc = 0;
        const u64 q_lo = blk * kBlock + 1;
        const u64 q_hi = std::min(Qmax, q_lo + kBlock - 1);
        for (u64 q = q_lo; q <= q_hi; ++q) {
            const auto mask = unit_mask(q);
            terms[blk] += euler_phi(q);
            const auto t = q_term(N, r, b, q);
            if (t.zero) continue;
            const long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(t.M) /
                                    static_cast<long double>(q);
            const std::complex<long double> w(std::cos(ang), std::sin(ang));
            std::complex<long double> z = 1, inner = 0;
            for (u64 a = 1; a <= q; ++a) {
                z *= w;
                if (mask[a]) inner += z;
            }
            acc += static_cast<long double>(t.coef) * inner;
        }
        part[blk] = acc;
    });
    std::complex<long double> total = 0;
    SingularSeriesValue v;
    for (u64 i = 0; i < blocks; ++i) {
        total += part[i];
        v.qsum_terms += terms[i];
    }
    v.N = N;
    v.r = r;
    v.b = b;
    v.compatible = (b.b1 + b.b2 + b.b3) % r == N % r;
    v.qsum = static_cast<double>(total.real());
    v.qsum_imag = static_cast<double>(total.imag());
    v.qsum_truncation = Qmax;
    return v;
}

double sigma_qsum_ramanujan(u64 N, u64 r, Residues b, u64 Qmax) {
    check_residues(r, b);
    if (Qmax == 0) throw DomainError("sigma_qsum_ramanujan: Qmax must be >= 1");
    long double total = 0;
    for (u64 q = 1; q <= Qmax; ++q) {
        const auto t = q_term(N, r, b, q);
        if (t.zero) continue;
        const u64 g = std::gcd(q, t.M);  // gcd(q, 0) = q
        const int mu = mobius(q / g);
        if (mu == 0) continue;
        const long double c = static_cast<long double>(mu) * static_cast<long double>(euler_phi(q)) /
                              static_cast<long double>(euler_phi(q / g));
        total += static_cast<long double>(t.coef) * c;
    }
    return static_cast<double>(total);
}

std::complex<double> sigma_qsum_literal(u64 N, u64 r, Residues b, u64 Qmax) {
    check_residues(r, b);
    std::complex<long double> total = 0;
    for (u64 q = 1; q <= Qmax; ++q) {
        for (u64 a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            const auto prod = f_coeff(r, q, a, b.b1).value * f_coeff(r, q, a, b.b2).value *
                              f_coeff(r, q, a, b.b3).value *
                              characters::unit_root(-static_cast<i64>(mul_mod(a, N % q, q)), q);
            total += std::complex<long double>(prod.real(), prod.imag());
        }
    }
    return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

u64 count_unit_triples(u64 p, u64 N) {
    if (p < 2) throw DomainError("count_unit_triples: p must be prime");
    const u64 n = N % p;
    u64 count = 0;
    for (u64 u1 = 1; u1 < p; ++u1)
        for (u64 u2 = 1; u2 < p; ++u2)
            if ((n + 2 * p - u1 - u2) % p != 0) ++count;
    return count;
}

double local_factor(u64 p, u64 N, u64 r, Residues b) {
    check_residues(r, b);
    if (r % p == 0) {
        u64 pe = 1;
        for (u64 v = r; v % p == 0; v /= p) pe *= p;
        const u64 phi = pe / p * (p - 1);
        u64 count = 0;
        for (u64 u1 = b.b1 % pe; u1 < pe; u1 += pe)
            for (u64 u2 = b.b2 % pe; u2 < pe; u2 += pe) {
                const u64 u3 = (N % pe + 2 * pe - u1 - u2) % pe;
                if (u3 % p != 0 && u3 == b.b3 % pe) ++count;
            }
        const double ph = static_cast<double>(phi);
        return static_cast<double>(pe) * static_cast<double>(count) / (ph * ph * ph);
    }
    u64 count;
    if (p < kExhaustiveBelow) {
        count = count_unit_triples(p, N);
    } else {
        const u64 pm = p - 1;
        const u64 cube = pm * pm * pm;
        count = N % p == 0 ? (cube - pm) / p : (cube + 1) / p;
    }
    const double pm = static_cast<double>(p - 1);
    return static_cast<double>(p) * static_cast<double>(count) / (pm * pm * pm);
}

SingularSeriesValue sigma_local(u64 N, u64 r, Residues b, u64 prime_bound) {
    check_residues(r, b);
    std::vector<u64> primes;
    if (prime_bound >= 2) {
        auto t = sieve_primes(prime_bound);
        primes.assign(t.primes().begin(), t.primes().end());
    }
    for (auto [p, e] : factorize(r).factors)
        if (p > prime_bound) primes.push_back(p);
    long double prod = 1;
    for (u64 p : primes) prod *= local_factor(p, N, r, b);
    SingularSeriesValue v;
    v.N = N;
    v.r = r;
    v.b = b;
    v.compatible = (b.b1 + b.b2 + b.b3) % r == N % r;
    v.local_product = static_cast<double>(prod);
    v.local_prime_bound = prime_bound;
    return v;
}

SingularSeriesValue singular_series(u64 N, u64 r, Residues b, u64 Qmax, u64 prime_bound) {
    auto v = sigma_qsum(N, r, b, Qmax);
    const auto loc = sigma_local(N, r, b, prime_bound);
    v.local_product = loc.local_product;
    v.local_prime_bound = prime_bound;
    return v;
}

PrintedFactorComparison compare_printed_factor(u64 p) {
    if (p < 3) throw DomainError("compare_printed_factor: p must be an odd prime");
    const double pm = static_cast<double>(p - 1);
    const double cube = pm * pm * pm;
    PrintedFactorComparison c;
    c.p = p;
    c.printed = (1 + 1 / cube) * pm * (pm * pm + 1) / (cube + 1);
    c.counted = local_factor(p, p, 1, {});
    return c;
}

double tail_bound(u64 r, u64 P) {
    if (P < 2) throw DomainError("tail_bound: P must be >= 2");
    if (r == 0) throw DomainError("tail_bound: r must be >= 1");
    const double phi = static_cast<double>(euler_phi(r));
    return std::pow(static_cast<double>(r), 2.1) / (phi * phi * phi) / static_cast<double>(P);
}

TailEstimate tail_estimate(u64 N, u64 r, Residues b, u64 P) {
    TailEstimate t;
    t.P = P;
    t.bound = tail_bound(r, P);
    t.measured = std::abs(sigma_qsum(N, r, b, 2 * P).qsum - sigma_qsum(N, r, b, P).qsum);
    return t;
}

}  // namespace isoprime::singular
