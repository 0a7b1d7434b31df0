#pragma once

// Dirichlet characters mod k, conductors, and the generalized Gauss sums
// G(d, f, m, chi_g, k) = sum_{n<=k, (n,k)=1, n = f (d)} chi_g(n) e(mn/k).

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "isoprime/arith.hpp"

namespace isoprime::characters {

/// e(num / den) = exp(2 pi i num / den), reduced before evaluation.
std::complex<double> unit_root(i64 num, u64 den);

class DirichletCharacter;

namespace detail {
struct GroupData;
}

/// (Z/kZ)^* as a product of cyclic factors, one generator per factor.
/// Characters are indexed by their exponent vectors in lexicographic order,
/// so index 0 is the principal character.
class CharacterGroup {
public:
    /// Throws DomainError for k = 0 and ResourceError for k > 10^4.
    explicit CharacterGroup(u64 k);

    u64 modulus() const;
    std::size_t size() const;
    /// Generators lifted to residues mod k, with their orders.
    std::vector<std::pair<u64, u64>> generators() const;
    /// lcm of the generator orders; every character angle has this denominator.
    u64 exponent() const;

    DirichletCharacter character(std::size_t index) const;
    DirichletCharacter principal() const;
    std::vector<DirichletCharacter> all() const;

private:
    std::shared_ptr<const detail::GroupData> data_;
};

struct Conductor;

class DirichletCharacter {
public:
    u64 modulus() const;
    std::size_t index() const { return index_; }
    const std::vector<u64>& exponents() const { return exps_; }

    /// chi(n) = e(angle / exponent) for units, nullopt when gcd(n, k) > 1.
    std::optional<u64> angle(u64 n) const;
    u64 angle_denominator() const;
    std::complex<double> operator()(u64 n) const;

    bool is_principal() const;
    /// Multiplicative order of the character.
    u64 order() const;
    DirichletCharacter conj() const;
    /// Pointwise product with a character of the same modulus.
    DirichletCharacter operator*(const DirichletCharacter& other) const;

    /// True when both take equal values on every unit mod lcm of the moduli.
    bool same_values(const DirichletCharacter& other, u64 modulus) const;

private:
    friend class CharacterGroup;
    DirichletCharacter(std::shared_ptr<const detail::GroupData> g, std::vector<u64> exps, std::size_t index)
        : group_(std::move(g)), exps_(std::move(exps)), index_(index) {}

    std::shared_ptr<const detail::GroupData> group_;
    std::vector<u64> exps_;
    std::size_t index_ = 0;
};

struct Conductor {
    u64 g_star = 1;
    std::optional<DirichletCharacter> primitive;  // character mod g_star inducing chi
};

/// Smallest g* | k with chi(n) = 1 for every unit n = 1 (mod g*).
Conductor conductor(const DirichletCharacter& chi);

/// Direct summation of G(d, f, m, chi, k); chi's modulus g must divide k,
/// and d must divide k (DomainError otherwise).
std::complex<double> gauss_sum(u64 d, u64 f, u64 m, const DirichletCharacter& chi, u64 k);

/// Closed form for the principal character mod k: 0 if gcd(d, k/d) > 1, else
/// mu(k/d) e(f m t / d) with t (k/d) = 1 (mod d). Needs d | k and
/// gcd(m, k) = gcd(f, k) = 1.
std::complex<double> principal_gauss_closed_form(u64 d, u64 f, u64 m, u64 k);

struct GcdSplit {
    u64 r = 1, q = 1, h = 1, h1 = 1, h2 = 1;
};

/// h = gcd(r, q); h1 keeps p^alpha for primes where h carries all of r's
/// p-part, h2 = h / h1. Then h1 h2 = h, gcd(h1, h2) = 1, gcd(r/h1, q/h2) = 1.
GcdSplit gcd_split(u64 r, u64 q);

}  // namespace isoprime::characters
