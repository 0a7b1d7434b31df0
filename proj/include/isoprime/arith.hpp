#pragma once

// Prime tables, 64-bit factorization, exact big integers and CRT.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace isoprime {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Sorted list of every prime up to `bound`.
class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(u64 bound, std::vector<u64> primes);

    u64 bound() const { return bound_; }
    std::span<const u64> primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    u64 operator[](std::size_t i) const { return primes_[i]; }

    /// Primality by lookup; throws CoverageError if n > bound.
    bool is_prime(u64 n) const;
    /// pi(x) for x <= bound.
    std::size_t count_upto(u64 x) const;
    /// Largest prime < n, or nullopt when n <= 2.
    std::optional<u64> prev_prime(u64 n) const;
    /// Smallest prime > n; throws CoverageError if it lies beyond the table.
    u64 next_prime(u64 n) const;
    /// Primes p with lo <= p <= hi (clipped to the table).
    std::span<const u64> range(u64 lo, u64 hi) const;

private:
    u64 bound_ = 0;
    std::vector<u64> primes_;
};

/// Segmented sieve of Eratosthenes. Throws DomainError for bound < 2.
PrimeTable sieve_primes(u64 bound);

/// Calls visit(p) for every prime in [lo, hi] in ascending order, holding
/// only one segment and the base primes up to sqrt(hi) in memory.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit);

/// Deterministic Miller-Rabin, exact for all 64-bit n.
bool is_prime_u64(u64 n);

/// n = prod p^e, primes strictly increasing.
struct Factorization {
    u64 n = 1;
    std::vector<std::pair<u64, unsigned>> factors;

    u64 product() const;
    bool operator==(const Factorization&) const = default;
};

/// Complete factorization of 1 <= n <= 2^63-1 (Pollard rho + Miller-Rabin).
Factorization factorize(u64 n);

/// Lambda(n): log p if n = p^k, else 0. Throws DomainError for n = 0.
double von_mangoldt(u64 n);

/// Lambda(n) for n = 0..limit (entry 0 is 0).
std::vector<double> von_mangoldt_table(u64 limit);

u64 euler_phi(u64 n);
int mobius(u64 n);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 a, u64 e, u64 m);
/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);
/// Smallest prime factor of n (n >= 2), by trial division up to `limit`;
/// returns nullopt if none <= limit.
std::optional<u64> small_factor(u64 n, u64 limit);

/// Arbitrary-precision non-negative integer. Decimal strings are the
/// serialization format.
class BigNat {
public:
    BigNat() = default;
    BigNat(u64 v);  // NOLINT(google-explicit-constructor)
    explicit BigNat(mpz_class v);

    static BigNat from_decimal(std::string_view s);
    std::string to_decimal() const;

    const mpz_class& raw() const { return v_; }

    BigNat& operator+=(const BigNat& o);
    BigNat& operator*=(const BigNat& o);
    friend BigNat operator+(BigNat a, const BigNat& b) { return a += b; }
    friend BigNat operator*(BigNat a, const BigNat& b) { return a *= b; }
    /// a - b; throws DomainError if b > a.
    friend BigNat operator-(const BigNat& a, const BigNat& b);

    u64 mod(u64 m) const;
    bool is_odd() const;
    bool fits_u64() const;
    u64 to_u64() const;
    /// Natural log (value must be positive).
    double log() const;
    std::size_t decimal_digits() const;

    friend bool operator==(const BigNat& a, const BigNat& b) { return a.v_ == b.v_; }
    friend auto operator<=>(const BigNat& a, const BigNat& b) {
        int c = cmp(a.v_, b.v_);
        return c <=> 0;
    }

private:
    mpz_class v_;
};

BigNat gcd(const BigNat& a, const BigNat& b);
BigNat pow(const BigNat& base, unsigned long e);
/// floor(a^(1/k)).
BigNat iroot(const BigNat& a, unsigned long k);
/// lcm(1, 2, ..., x).
BigNat lcm_upto(u64 x);

struct Congruence {
    u64 residue;
    u64 modulus;
};

/// Unique v in [0, prod moduli) with v = residue_i (mod modulus_i).
/// Throws ConflictError naming the first non-coprime pair and DomainError
/// for residue >= modulus or modulus = 0.
BigNat crt_solve(std::span<const Congruence> congruences);

/// max(log_k x, 1) with log_1 = log and log_k = log(log_{k-1}); any
/// intermediate value <= 0 clamps the result to 1.
double iterated_log(double x, int k);

}  // namespace isoprime
