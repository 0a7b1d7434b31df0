#include "isoprime/characters.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "isoprime/error.hpp"

namespace isoprime::characters {

std::complex<double> unit_root(i64 num, u64 den) {
    if (den == 0) throw DomainError("unit_root: zero denominator");
    const auto d = static_cast<i64>(den);
    i64 r = num % d;
    if (r < 0) r += d;
    // Fold into (-1/2, 1/2] so the angle passed to sin/cos is small.
    if (2 * r > d) r -= d;
    const long double t = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) /
                          static_cast<long double>(d);
    return {static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t))};
}

namespace detail {

struct Component {
    u64 modulus = 1;               // p^e
    std::vector<u64> gens;         // generators mod p^e (0, 1 or 2 of them)
    std::vector<u64> orders;
    std::vector<std::vector<u64>> dlog;  // dlog[j][n mod p^e], valid on units
};

struct GroupData {
    u64 k = 1;
    u64 exponent = 1;
    std::size_t size = 1;
    std::vector<Component> comps;
    std::vector<u64> orders;     // flattened over all generators
    std::vector<u64> lifted;     // generators as residues mod k
    std::vector<std::size_t> comp_of;  // generator -> component
    std::vector<std::size_t> slot_of;  // generator -> index within component

    // Exponents of n in terms of the generators; nullopt for non-units.
    std::optional<std::vector<u64>> dlog(u64 n) const {
        if (std::gcd(n % k, k) != 1 && k != 1) return std::nullopt;
        std::vector<u64> out(orders.size());
        for (std::size_t g = 0; g < orders.size(); ++g) {
            const auto& c = comps[comp_of[g]];
            out[g] = c.dlog[slot_of[g]][n % c.modulus];
        }
        return out;
    }
};

}  // namespace detail

namespace {

u64 primitive_root_prime_power(u64 p, unsigned e) {
    const u64 phi = p - 1;
    auto f = factorize(phi);
    u64 g = 2;
    for (;; ++g) {
        bool ok = true;
        for (auto [q, mult] : f.factors)
            if (pow_mod(g, phi / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) break;
    }
    if (e >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
    return g;
}

detail::Component make_component(u64 p, unsigned e) {
    detail::Component c;
    c.modulus = 1;
    for (unsigned i = 0; i < e; ++i) c.modulus *= p;
    const u64 m = c.modulus;
    if (p != 2) {
        c.gens = {primitive_root_prime_power(p, e) % m};
        c.orders = {m / p * (p - 1)};
    } else if (e == 2) {
        c.gens = {3};
        c.orders = {2};
    } else if (e >= 3) {
        c.gens = {m - 1, 5};
        c.orders = {2, m / 4};
    }
    c.dlog.assign(c.gens.size(), std::vector<u64>(m, 0));
    if (c.gens.size() == 1) {
        u64 v = 1;
        for (u64 i = 0; i < c.orders[0]; ++i) {
            c.dlog[0][v] = i;
            v = v * c.gens[0] % m;
        }
    } else if (c.gens.size() == 2) {
        u64 a = 1;
        for (u64 i = 0; i < c.orders[0]; ++i) {
            u64 v = a;
            for (u64 j = 0; j < c.orders[1]; ++j) {
                c.dlog[0][v] = i;
                c.dlog[1][v] = j;
                v = v * c.gens[1] % m;
            }
            a = a * c.gens[0] % m;
        }
    }
    return c;
}

}  // namespace

CharacterGroup::CharacterGroup(u64 k) {
    if (k == 0) throw DomainError("CharacterGroup: modulus must be >= 1");
    if (k > 10'000) throw ResourceError("CharacterGroup: modulus above 10^4");
    auto d = std::make_shared<detail::GroupData>();
    d->k = k;
    for (auto [p, e] : factorize(k).factors) {
        auto c = make_component(p, e);
        const std::size_t ci = d->comps.size();
        for (std::size_t j = 0; j < c.gens.size(); ++j) {
            // Lift: = gen mod p^e, = 1 mod k / p^e.
            const u64 rest = k / c.modulus;
            const Congruence cs[] = {{c.gens[j], c.modulus}, {1 % rest, rest}};
            d->lifted.push_back(crt_solve(cs).to_u64());
            d->orders.push_back(c.orders[j]);
            d->comp_of.push_back(ci);
            d->slot_of.push_back(j);
            d->exponent = std::lcm(d->exponent, c.orders[j]);
            d->size *= c.orders[j];
        }
        d->comps.push_back(std::move(c));
    }
    data_ = std::move(d);
}

u64 CharacterGroup::modulus() const { return data_->k; }
std::size_t CharacterGroup::size() const { return data_->size; }
u64 CharacterGroup::exponent() const { return data_->exponent; }

std::vector<std::pair<u64, u64>> CharacterGroup::generators() const {
    std::vector<std::pair<u64, u64>> out;
    for (std::size_t i = 0; i < data_->orders.size(); ++i) out.emplace_back(data_->lifted[i], data_->orders[i]);
    return out;
}

DirichletCharacter CharacterGroup::character(std::size_t index) const {
    if (index >= data_->size) throw DomainError("CharacterGroup::character: index out of range");
    std::vector<u64> exps(data_->orders.size());
    std::size_t rest = index;
    for (std::size_t g = data_->orders.size(); g-- > 0;) {
        exps[g] = rest % data_->orders[g];
        rest /= data_->orders[g];
    }
    return DirichletCharacter(data_, std::move(exps), index);
}

DirichletCharacter CharacterGroup::principal() const { return character(0); }

std::vector<DirichletCharacter> CharacterGroup::all() const {
    std::vector<DirichletCharacter> out;
    out.reserve(data_->size);
    for (std::size_t i = 0; i < data_->size; ++i) out.push_back(character(i));
    return out;
}

u64 DirichletCharacter::modulus() const { return group_->k; }

u64 DirichletCharacter::angle_denominator() const { return group_->exponent; }

std::optional<u64> DirichletCharacter::angle(u64 n) const {
    auto dl = group_->dlog(n);
    if (!dl) return std::nullopt;
    const u64 E = group_->exponent;
    u64 a = 0;
    for (std::size_t g = 0; g < exps_.size(); ++g) {
        const u64 step = E / group_->orders[g];
        a = (a + exps_[g] * (*dl)[g] % group_->orders[g] * step) % E;
    }
    return a;
}

std::complex<double> DirichletCharacter::operator()(u64 n) const {
    auto a = angle(n);
    if (!a) return {0.0, 0.0};
    return unit_root(static_cast<i64>(*a), group_->exponent);
}

bool DirichletCharacter::is_principal() const {
    return std::all_of(exps_.begin(), exps_.end(), [](u64 e) { return e == 0; });
}

u64 DirichletCharacter::order() const {
    u64 o = 1;
    for (std::size_t g = 0; g < exps_.size(); ++g) {
        const u64 og = group_->orders[g];
        o = std::lcm(o, og / std::gcd(og, exps_[g]));
    }
    return o;
}

namespace {
std::size_t index_of(const std::vector<u64>& exps, const std::vector<u64>& orders) {
    std::size_t idx = 0;
    for (std::size_t g = 0; g < exps.size(); ++g) idx = idx * orders[g] + exps[g];
    return idx;
}
}  // namespace

DirichletCharacter DirichletCharacter::conj() const {
    std::vector<u64> e(exps_.size());
    for (std::size_t g = 0; g < e.size(); ++g) e[g] = (group_->orders[g] - exps_[g]) % group_->orders[g];
    const auto idx = index_of(e, group_->orders);
    return DirichletCharacter(group_, std::move(e), idx);
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
    if (other.group_->k != group_->k) throw DomainError("character product needs equal moduli");
    std::vector<u64> e(exps_.size());
    for (std::size_t g = 0; g < e.size(); ++g) e[g] = (exps_[g] + other.exps_[g]) % group_->orders[g];
    const auto idx = index_of(e, group_->orders);
    return DirichletCharacter(group_, std::move(e), idx);
}

bool DirichletCharacter::same_values(const DirichletCharacter& other, u64 modulus) const {
    const u64 E1 = angle_denominator(), E2 = other.angle_denominator();
    for (u64 n = 1; n <= modulus; ++n) {
        if (std::gcd(n, modulus) != 1) continue;
        auto a = angle(n);
        auto b = other.angle(n);
        if (!a || !b) return false;
        // a/E1 = b/E2 (mod 1)
        if ((*a * E2) % (E1 * E2) != (*b * E1) % (E1 * E2)) return false;
    }
    return true;
}

Conductor conductor(const DirichletCharacter& chi) {
    const u64 k = chi.modulus();
    Conductor out;
    for (u64 d = 1; d <= k; ++d) {
        if (k % d != 0) continue;
        bool trivial = true;
        for (u64 n = 1; n <= k && trivial; n += d) {  // n = 1 (mod d)
            if (std::gcd(n, k) != 1) continue;
            if (chi.angle(n).value() != 0) trivial = false;
        }
        if (!trivial) continue;
        out.g_star = d;
        CharacterGroup g(d);
        for (const auto& cand : g.all()) {
            if (cand.same_values(chi, k)) {
                out.primitive = cand;
                break;
            }
        }
        return out;
    }
    return out;
}

std::complex<double> gauss_sum(u64 d, u64 f, u64 m, const DirichletCharacter& chi, u64 k) {
    const u64 g = chi.modulus();
    if (k == 0 || d == 0 || k % d != 0) throw DomainError("gauss_sum: d must divide k");
    if (k % g != 0) throw DomainError("gauss_sum: character modulus must divide k");
    const u64 E = chi.angle_denominator();
    const u64 den = E * k;
    // Bucket the exact angles first, then evaluate each distinct root once.
    std::map<u64, u64> buckets;
    for (u64 n = f % d == 0 ? d : f % d; n <= k; n += d) {
        if (std::gcd(n, k) != 1) continue;
        auto a = chi.angle(n);
        if (!a) continue;
        const u64 num = (*a * k + (m % k) * n % k * E) % den;
        ++buckets[num];
    }
    std::complex<long double> acc = 0;
    for (auto [num, cnt] : buckets) {
        auto w = unit_root(static_cast<i64>(num), den);
        acc += std::complex<long double>(w.real(), w.imag()) * static_cast<long double>(cnt);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::complex<double> principal_gauss_closed_form(u64 d, u64 f, u64 m, u64 k) {
    if (k == 0 || d == 0 || k % d != 0) throw DomainError("principal_gauss_closed_form: d must divide k");
    if (std::gcd(m, k) != 1 || std::gcd(f, k) != 1)
        throw DomainError("principal_gauss_closed_form: need gcd(m, k) = gcd(f, k) = 1");
    const u64 kd = k / d;
    if (std::gcd(d, kd) > 1) return {0.0, 0.0};
    const int mu = mobius(kd);
    if (mu == 0) return {0.0, 0.0};
    const u64 t = d == 1 ? 0 : inv_mod(kd % d, d);
    const u64 num = d == 1 ? 0 : mul_mod(mul_mod(f % d, m % d, d), t, d);
    return static_cast<double>(mu) * unit_root(static_cast<i64>(num), d);
}

GcdSplit gcd_split(u64 r, u64 q) {
    if (r == 0 || q == 0) throw DomainError("gcd_split: r, q must be >= 1");
    GcdSplit s;
    s.r = r;
    s.q = q;
    s.h = std::gcd(r, q);
    s.h1 = 1;
    for (auto [p, gamma] : factorize(s.h).factors) {
        unsigned alpha = 0;
        for (u64 v = r; v % p == 0; v /= p) ++alpha;
        if (alpha == gamma)
            for (unsigned i = 0; i < alpha; ++i) s.h1 *= p;
    }
    s.h2 = s.h / s.h1;
    return s;
}

}  // namespace isoprime::characters
