#include "isoprime/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "isoprime/error.hpp"

namespace isoprime::smooth {

namespace {

constexpr u64 kSegment = 1u << 16;
constexpr int kRhoSteps = 10000;  // grid points per unit of u
constexpr double kRhoMax = 20.0;

const std::vector<double>& rho_grid() {
    static const std::vector<double> grid = [] {
        const int n = static_cast<int>(kRhoMax) * kRhoSteps;
        const double h = 1.0 / kRhoSteps;
        std::vector<double> g(n + 1);
        for (int i = 0; i <= std::min(n, kRhoSteps); ++i) g[i] = 1.0;
        for (int i = kRhoSteps + 1; i <= std::min(n, 2 * kRhoSteps); ++i) g[i] = 1.0 - std::log(i * h);
        // u rho(u) = int_{u-1}^{u} rho(t) dt by the trapezoid rule. Every weight
        // is positive, so rho stays positive and the error stays relative.
        // The window sum is refreshed now and then to stop drift.
        long double window = 0;  // g[i-K+1] + ... + g[i-1]
        for (int i = 2 * kRhoSteps + 1; i <= n; ++i) {
            if ((i - 2 * kRhoSteps - 1) % 1000 == 0) {
                window = 0;
                for (int j = i - kRhoSteps + 1; j <= i - 1; ++j) window += g[j];
            }
            const long double lhs = static_cast<long double>(h) * (0.5L * g[i - kRhoSteps] + window);
            g[i] = static_cast<double>(lhs / (i * h - 0.5 * h));
            window += static_cast<long double>(g[i]) - g[i - kRhoSteps + 1];
        }
        return g;
    }();
    return grid;
}

}  // namespace

double dickman_rho(double u) {
    if (u < 0 || std::isnan(u)) throw DomainError("dickman_rho: u must be >= 0");
    if (u <= 1) return 1.0;
    if (u <= 2) return 1.0 - std::log(u);
    if (u > kRhoMax) return 0.0;
    const auto& g = rho_grid();
    const double pos = u * kRhoSteps;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= g.size()) return g.back();
    const double t = pos - static_cast<double>(i);
    return g[i] * (1 - t) + g[i + 1] * t;
}

bool is_smooth(u64 n, u64 z) {
    if (n == 0) throw DomainError("is_smooth: n must be >= 1");
    for (u64 p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            if (p > z) return false;
            n /= p;
        }
    }
    return n == 1 || n <= z;
}

SmoothCount count_smooth(double x, double y, double z) {
    if (!(x >= 0) || !(y > x)) throw DomainError("count_smooth: need 0 <= x < y");
    if (!(z >= 2)) throw DomainError("count_smooth: need z >= 2");
    if (y > 1e9) throw ResourceError("count_smooth: y beyond 1e9");
    SmoothCount out{x, y, z, 0, 0};
    const u64 lo = static_cast<u64>(std::floor(x)) + 1;
    const u64 hi = static_cast<u64>(std::floor(y));
    const u64 zf = static_cast<u64>(std::floor(z));
    std::vector<u64> primes;
    if (zf >= 2) {
        auto t = sieve_primes(zf);
        primes.assign(t.primes().begin(), t.primes().end());
    }
    std::vector<u64> rem;
    for (u64 seg = lo; seg <= hi; seg += kSegment) {
        const u64 len = std::min<u64>(kSegment, hi - seg + 1);
        rem.resize(len);
        std::iota(rem.begin(), rem.end(), seg);
        for (u64 p : primes) {
            u64 first = (seg + p - 1) / p * p;
            for (u64 m = first; m < seg + len; m += p) {
                u64& v = rem[m - seg];
                do v /= p;
                while (v % p == 0);
            }
        }
        for (u64 v : rem)
            if (v == 1) ++out.count;
        if (hi - seg < kSegment) break;
    }
    out.estimate = y * dickman_rho(std::log(y) / std::log(z));
    return out;
}

SurvivorClass classify_survivor(u64 n, const cover::ResidueSystem& system, const cover::SieveProfile& profile,
                                const PrimeTable& table) {
    if (!(static_cast<double>(n) > profile.x && static_cast<double>(n) <= profile.y))
        throw DomainError("classify_survivor: n outside (x, y]");
    for (u64 p : table.range(2, static_cast<u64>(std::floor(profile.x)))) {
        if (n % p == system.d(p)) return {SurvivorKind::sifted, p};
    }
    if (table.is_prime(n)) return {SurvivorKind::in_q, 0};
    if (is_smooth(n, static_cast<u64>(std::floor(profile.z)))) return {SurvivorKind::in_r, 0};
    return {SurvivorKind::lemma_violation, 0};
}

BrunTitchmarsh brun_titchmarsh_check(u64 w, u64 r, u64 b, const PrimeTable& table) {
    if (r < 1 || w <= r) throw DomainError("brun_titchmarsh_check: need 1 <= r < w");
    if (std::gcd(b, r) != 1) throw DomainError("brun_titchmarsh_check: gcd(b, r) must be 1");
    if (w > table.bound()) throw CoverageError("brun_titchmarsh_check: table does not reach w");
    BrunTitchmarsh out;
    const u64 cls = b % r;
    for (u64 p : table.range(2, w))
        if (p % r == cls) ++out.count;
    out.bound = 2.0 * static_cast<double>(w) /
                (static_cast<double>(euler_phi(r)) * std::log(static_cast<double>(w) / static_cast<double>(r)));
    out.pass = static_cast<double>(out.count) <= out.bound;
    return out;
}

BrunTitchmarshSweep brun_titchmarsh_sweep(u64 w_max, u64 r_max, const PrimeTable& table) {
    if (w_max > table.bound()) throw CoverageError("brun_titchmarsh_sweep: table does not reach w_max");
    BrunTitchmarshSweep sw;
    const auto primes = table.range(2, w_max);
    for (u64 r = 1; r <= r_max && r < w_max; ++r) {
        const double phi = static_cast<double>(euler_phi(r));
        const double rr = static_cast<double>(r);
        auto bound = [&](u64 w) { return 2.0 * static_cast<double>(w) / (phi * std::log(static_cast<double>(w) / rr)); };
        const auto turn = static_cast<u64>(std::floor(std::exp(1.0) * rr));

        std::vector<std::vector<u64>> classes(r);
        for (u64 p : primes) classes[p % r].push_back(p);
        for (u64 b = 0; b < r; ++b) {
            if (std::gcd(b, r) != 1) continue;
            const auto& cls = classes[b];
            auto test = [&](u64 w, u64 count) {
                if (w <= r || w > w_max) return;
                ++sw.cases;
                const double bd = bound(w);
                const double ratio = static_cast<double>(count) / bd;
                if (ratio > sw.worst_ratio) {
                    sw.worst_ratio = ratio;
                    sw.worst_w = w;
                    sw.worst_r = r;
                    sw.worst_b = b;
                }
                if (static_cast<double>(count) > bd) ++sw.violations;
            };
            auto stretch = [&](u64 lo, u64 hi, u64 count) {
                if (lo > hi) return;
                test(lo, count);
                test(hi, count);
                for (u64 w : {turn, turn + 1})
                    if (w > lo && w < hi) test(w, count);
            };
            const u64 start = r + 1;
            std::size_t k = static_cast<std::size_t>(std::upper_bound(cls.begin(), cls.end(), start) - cls.begin());
            u64 lo = start;
            u64 count = k;
            for (; k < cls.size(); ++k) {
                stretch(lo, cls[k] - 1, count);
                lo = cls[k];
                ++count;
            }
            stretch(lo, w_max, count);
        }
    }
    return sw;
}

}  // namespace isoprime::smooth
