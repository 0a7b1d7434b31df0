#include "isoprime/isolation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "isoprime/error.hpp"

namespace isoprime::isolation {

GFunction GFunction::parse(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw DomainError("g-spec must look like kind:value, got '" + std::string(spec) + "'");
    std::string_view kind = spec.substr(0, colon);
    std::string value(spec.substr(colon + 1));
    double v = 0;
    try {
        std::size_t used = 0;
        v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw DomainError("g-spec value is not a number: '" + value + "'");
    }
    if (!(v >= 0) || !std::isfinite(v)) throw DomainError("g-spec value must be finite and >= 0");
    if (kind == "const" || kind == "window") return window(v);
    if (kind == "g") return constant(v);
    if (kind == "rankin") return rankin(v);
    if (kind == "ford") return ford(v);
    throw DomainError("unknown g-spec kind '" + std::string(kind) + "'");
}

std::string GFunction::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "g:"; break;
        case Kind::rankin: os << "rankin:"; break;
        case Kind::ford: os << "ford:"; break;
        case Kind::window: os << "const:"; break;
    }
    os << c;
    return os.str();
}

double g_value(const GFunction& g, double p) {
    if (!(p >= 3)) throw DomainError("g_value: p must be >= 3");
    switch (g.kind) {
        case GFunction::Kind::constant:
            return g.c;
        case GFunction::Kind::rankin: {
            const double l3 = iterated_log(p, 3);
            return g.c * iterated_log(p, 2) * iterated_log(p, 4) / (l3 * l3);
        }
        case GFunction::Kind::ford:
            return g.c * iterated_log(p, 2) * iterated_log(p, 4) / iterated_log(p, 3);
        case GFunction::Kind::window:
            return g.c / std::log(p);
    }
    return 0;
}

double threshold(const GFunction& g, u64 p) {
    if (g.kind == GFunction::Kind::window) return g.c;
    const double pp = static_cast<double>(std::max<u64>(p, 3));
    return std::log(pp) * g_value(g, pp);
}

namespace {

u64 radius_from_neighbours(u64 p, std::optional<u64> prev, u64 next) {
    const u64 above = next - p - 1;
    if (!prev) return above;
    return std::min(p - *prev - 1, above);
}

}  // namespace

u64 isolation_radius(u64 p, const PrimeTable& table) {
    if (p > table.bound()) throw CoverageError("isolation_radius: p beyond prime table");
    if (!table.is_prime(p)) throw DomainError("isolation_radius: " + std::to_string(p) + " is not prime");
    return radius_from_neighbours(p, table.prev_prime(p), table.next_prime(p));
}

IsolationReport is_isolated(u64 p, const GFunction& g, const PrimeTable& table) {
    IsolationReport r;
    r.p = p;
    r.radius = isolation_radius(p, table);
    r.threshold = threshold(g, p);
    r.isolated = static_cast<double>(r.radius) >= r.threshold;
    return r;
}

void scan_isolated(u64 lo, u64 hi, const GFunction& g, const std::function<void(const IsolationReport&)>& emit) {
    if (lo > hi) return;
    lo = std::max<u64>(lo, 2);
    if (lo > hi) return;

    std::optional<u64> prev;
    for (u64 m = lo - 1; m >= 2; --m) {
        if (is_prime_u64(m)) {
            prev = m;
            break;
        }
    }
    u64 after = hi + 1;
    while (!is_prime_u64(after)) ++after;

    // Sliding window over consecutive primes: (prev, cur) known, next arrives.
    std::optional<u64> cur;
    auto step = [&](u64 next) {
        if (cur) {
            IsolationReport r;
            r.p = *cur;
            r.radius = radius_from_neighbours(*cur, prev, next);
            r.threshold = threshold(g, *cur);
            r.isolated = static_cast<double>(r.radius) >= r.threshold;
            emit(r);
            prev = cur;
        }
        cur = next;
    };
    for_each_prime(lo, hi, step);
    step(after);
}

std::vector<IsolationReport> scan_isolated(u64 lo, u64 hi, const GFunction& g) {
    std::vector<IsolationReport> out;
    scan_isolated(lo, hi, g, [&](const IsolationReport& r) { out.push_back(r); });
    return out;
}

TwoIsolatedFinder::TwoIsolatedFinder(u64 limit, const GFunction& g, const PrimeTable& table)
    : limit_(limit), table_(&table) {
    if (limit + 1 > table.bound()) throw CoverageError("TwoIsolatedFinder: prime table must exceed limit");
    table.next_prime(limit);  // coverage check for the last candidate's right neighbour
    for (u64 p : table.range(2, limit)) {
        if (is_isolated(p, g, table).isolated) isolated_.push_back(p);
    }
}

std::optional<Triple> TwoIsolatedFinder::find(u64 N) const {
    if (N % 2 == 0) throw DomainError("find_two_isolated_rep: N must be odd");
    if (N < 9) throw DomainError("find_two_isolated_rep: N must be >= 9");
    if (N > limit_) throw CoverageError("find_two_isolated_rep: N beyond precomputed limit");
    const auto& iso = isolated_;
    for (std::size_t i = 0; i < iso.size(); ++i) {
        const u64 p1 = iso[i];
        if (2 * p1 + 2 > N) break;
        for (std::size_t j = i; j < iso.size(); ++j) {
            const u64 p2 = iso[j];
            if (p1 + p2 + 2 > N) break;
            const u64 p3 = N - p1 - p2;
            if (table_->is_prime(p3)) return Triple{p1, p2, p3};
        }
    }
    return std::nullopt;
}

std::optional<Triple> find_two_isolated_rep(u64 N, const GFunction& g, const PrimeTable& table) {
    if (N % 2 == 0) throw DomainError("find_two_isolated_rep: N must be odd");
    if (N < 9) throw DomainError("find_two_isolated_rep: N must be >= 9");
    return TwoIsolatedFinder(N, g, table).find(N);
}

}  // namespace isoprime::isolation
