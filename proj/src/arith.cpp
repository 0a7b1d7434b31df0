#include "isoprime/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "isoprime/error.hpp"
#include "isoprime/parallel.hpp"

namespace isoprime {

namespace {

constexpr u64 kSegment = 1u << 16;

std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<char> composite(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

u64 isqrt(u64 n) {
    auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Marks composites in [lo, lo + len) using base primes; flags[i] = 1 means n = lo + i is prime.
void sieve_segment(u64 lo, u64 len, std::span<const u64> base, std::vector<char>& flags) {
    flags.assign(len, 1);
    for (u64 p : base) {
        if (p * p >= lo + len) break;
        u64 start = std::max(p * p, (lo + p - 1) / p * p);
        for (u64 m = start; m < lo + len; m += p) flags[m - lo] = 0;
    }
    for (u64 n = lo; n < lo + len && n < 2; ++n) flags[n - lo] = 0;
}

}  // namespace

PrimeTable::PrimeTable(u64 bound, std::vector<u64> primes) : bound_(bound), primes_(std::move(primes)) {}

bool PrimeTable::is_prime(u64 n) const {
    if (n > bound_) throw CoverageError("prime table bound " + std::to_string(bound_) + " < " + std::to_string(n));
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

std::size_t PrimeTable::count_upto(u64 x) const {
    if (x > bound_) throw CoverageError("prime table bound " + std::to_string(bound_) + " < " + std::to_string(x));
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::optional<u64> PrimeTable::prev_prime(u64 n) const {
    if (n > bound_ + 1) {
        throw CoverageError("prime table bound " + std::to_string(bound_) + " too small for prev_prime(" +
                            std::to_string(n) + ")");
    }
    auto it = std::lower_bound(primes_.begin(), primes_.end(), n);
    if (it == primes_.begin()) return std::nullopt;
    return *std::prev(it);
}

u64 PrimeTable::next_prime(u64 n) const {
    auto it = std::upper_bound(primes_.begin(), primes_.end(), n);
    if (it == primes_.end()) {
        throw CoverageError("prime table bound " + std::to_string(bound_) + " too small for next_prime(" +
                            std::to_string(n) + ")");
    }
    return *it;
}

std::span<const u64> PrimeTable::range(u64 lo, u64 hi) const {
    if (lo > hi) return {};
    auto b = std::lower_bound(primes_.begin(), primes_.end(), lo);
    auto e = std::upper_bound(b, primes_.end(), hi);
    return {b, e};
}

PrimeTable sieve_primes(u64 bound) {
    if (bound < 2) throw DomainError("sieve_primes: bound must be >= 2");
    const std::vector<u64> base = simple_sieve(isqrt(bound));
    const u64 segments = bound / kSegment + 1;
    std::vector<std::vector<u64>> found(segments);
    parallel_for(segments, [&](std::size_t s) {
        const u64 lo = s * kSegment;
        const u64 len = std::min<u64>(kSegment, bound + 1 - lo);
        std::vector<char> flags;
        sieve_segment(lo, len, base, flags);
        for (u64 i = 0; i < len; ++i)
            if (flags[i]) found[s].push_back(lo + i);
    });
    std::vector<u64> primes;
    for (auto& seg : found) primes.insert(primes.end(), seg.begin(), seg.end());
    return PrimeTable(bound, std::move(primes));
}

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& visit) {
    if (lo > hi) return;
    const std::vector<u64> base = simple_sieve(isqrt(hi));
    std::vector<char> flags;
    for (u64 seg = lo; seg <= hi;) {
        const u64 len = std::min<u64>(kSegment, hi - seg + 1);
        sieve_segment(seg, len, base, flags);
        for (u64 i = 0; i < len; ++i)
            if (flags[i]) visit(seg + i);
        if (hi - seg < len) break;
        seg += len;
    }
}

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1) throw DomainError("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t) % m;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace {

// Brent's variant; deterministic for a fixed starting constant.
u64 pollard_brent(u64 n, u64 c) {
    if (n % 2 == 0) return 2;
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        do {
            ys = y;
            for (u64 i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mul_mod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
            k += m;
        } while (k < r && g == 1);
        r <<= 1;
    } while (g == 1);
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

void split(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    for (u64 c = 1;; ++c) {
        u64 d = pollard_brent(n, c);
        if (d != n) {
            split(d, out);
            split(n / d, out);
            return;
        }
    }
}

}  // namespace

u64 Factorization::product() const {
    u64 r = 1;
    for (auto [p, e] : factors)
        for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

Factorization factorize(u64 n) {
    if (n == 0) throw DomainError("factorize: n must be >= 1");
    if (n > (u64{1} << 63) - 1) throw DomainError("factorize: n exceeds 2^63-1");
    std::vector<u64> primes;
    u64 m = n;
    for (u64 p = 2; p < 1000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    split(m, primes);
    std::sort(primes.begin(), primes.end());
    Factorization f;
    f.n = n;
    for (u64 p : primes) {
        if (!f.factors.empty() && f.factors.back().first == p)
            ++f.factors.back().second;
        else
            f.factors.emplace_back(p, 1);
    }
    return f;
}

double von_mangoldt(u64 n) {
    if (n == 0) throw DomainError("von_mangoldt: n must be >= 1");
    if (n == 1) return 0.0;
    auto f = factorize(n);
    return f.factors.size() == 1 ? std::log(static_cast<double>(f.factors[0].first)) : 0.0;
}

std::vector<double> von_mangoldt_table(u64 limit) {
    std::vector<double> lam(limit + 1, 0.0);
    if (limit < 2) return lam;
    for (u64 p : simple_sieve(limit)) {
        const double lp = std::log(static_cast<double>(p));
        for (u64 q = p;; q *= p) {
            lam[q] = lp;
            if (q > limit / p) break;
        }
    }
    return lam;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw DomainError("euler_phi: n must be >= 1");
    u64 r = n;
    for (auto [p, e] : factorize(n).factors) r = r / p * (p - 1);
    return r;
}

int mobius(u64 n) {
    if (n == 0) throw DomainError("mobius: n must be >= 1");
    int s = 1;
    for (auto [p, e] : factorize(n).factors) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

std::optional<u64> small_factor(u64 n, u64 limit) {
    for (u64 p = 2; p <= limit && p <= n; ++p) {
        if (n % p == 0) return p;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// BigNat

BigNat::BigNat(u64 v) {
    mpz_import(v_.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
}

BigNat::BigNat(mpz_class v) : v_(std::move(v)) {
    if (sgn(v_) < 0) throw DomainError("BigNat: negative value");
}

BigNat BigNat::from_decimal(std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw DomainError("BigNat: not a decimal natural: '" + std::string(s) + "'");
    return BigNat(mpz_class(std::string(s), 10));
}

std::string BigNat::to_decimal() const { return v_.get_str(10); }

BigNat& BigNat::operator+=(const BigNat& o) {
    v_ += o.v_;
    return *this;
}

BigNat& BigNat::operator*=(const BigNat& o) {
    v_ *= o.v_;
    return *this;
}

BigNat operator-(const BigNat& a, const BigNat& b) {
    if (b.v_ > a.v_) throw DomainError("BigNat: subtraction underflow");
    return BigNat(mpz_class(a.v_ - b.v_));
}

u64 BigNat::mod(u64 m) const {
    if (m == 0) throw DomainError("BigNat::mod: zero modulus");
    mpz_class r;
    mpz_class mm = BigNat(m).v_;
    mpz_mod(r.get_mpz_t(), v_.get_mpz_t(), mm.get_mpz_t());
    return BigNat(r).to_u64();
}

bool BigNat::is_odd() const { return mpz_odd_p(v_.get_mpz_t()) != 0; }

bool BigNat::fits_u64() const { return mpz_sizeinbase(v_.get_mpz_t(), 2) <= 64; }

u64 BigNat::to_u64() const {
    if (!fits_u64()) throw DomainError("BigNat: value exceeds 64 bits");
    u64 out = 0;
    std::size_t count = 0;
    mpz_export(&out, &count, 1, sizeof(out), 0, 0, v_.get_mpz_t());
    return count == 0 ? 0 : out;
}

double BigNat::log() const {
    if (sgn(v_) == 0) throw DomainError("BigNat::log of zero");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, v_.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

std::size_t BigNat::decimal_digits() const { return to_decimal().size(); }

BigNat gcd(const BigNat& a, const BigNat& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
    return BigNat(g);
}

BigNat pow(const BigNat& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.raw().get_mpz_t(), e);
    return BigNat(r);
}

BigNat iroot(const BigNat& a, unsigned long k) {
    if (k == 0) throw DomainError("iroot: k must be >= 1");
    mpz_class r;
    mpz_root(r.get_mpz_t(), a.raw().get_mpz_t(), k);
    return BigNat(r);
}

BigNat lcm_upto(u64 x) {
    mpz_class r = 1;
    for (u64 n = 2; n <= x; ++n) {
        mpz_class nn = BigNat(n).raw();
        mpz_lcm(r.get_mpz_t(), r.get_mpz_t(), nn.get_mpz_t());
    }
    return BigNat(r);
}

BigNat crt_solve(std::span<const Congruence> congruences) {
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        const auto& c = congruences[i];
        if (c.modulus == 0) throw DomainError("crt_solve: zero modulus");
        if (c.residue >= c.modulus)
            throw DomainError("crt_solve: residue " + std::to_string(c.residue) + " not reduced mod " +
                              std::to_string(c.modulus));
        for (std::size_t j = 0; j < i; ++j) {
            if (std::gcd(c.modulus, congruences[j].modulus) != 1) {
                throw ConflictError("crt_solve: moduli " + std::to_string(congruences[j].modulus) + " and " +
                                        std::to_string(c.modulus) + " are not coprime",
                                    congruences[j].modulus, c.modulus);
            }
        }
    }
    // Incremental Garner: keep v mod M, lift one congruence at a time.
    mpz_class v = 0, M = 1;
    for (const auto& c : congruences) {
        const u64 m = c.modulus;
        const u64 vm = BigNat(v).mod(m);
        const u64 Mm = BigNat(M).mod(m);
        const u64 diff = (c.residue + m - vm) % m;
        const u64 t = m == 1 ? 0 : mul_mod(diff, inv_mod(Mm, m), m);
        v += M * BigNat(t).raw();
        M *= BigNat(m).raw();
    }
    return BigNat(v);
}

double iterated_log(double x, int k) {
    if (!(x > 0)) throw DomainError("iterated_log: x must be positive");
    if (k < 1 || k > 4) throw DomainError("iterated_log: k must be in 1..4");
    double v = x;
    for (int i = 0; i < k; ++i) {
        if (v <= 0) return 1.0;
        v = std::log(v);
    }
    return std::max(v, 1.0);
}

}  // namespace isoprime
