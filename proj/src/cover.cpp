#include "isoprime/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "isoprime/error.hpp"
#include "isoprime/parallel.hpp"
#include "isoprime/smooth.hpp"

namespace isoprime::cover {

namespace {

u64 floor_u(double v) { return v <= 0 ? 0 : static_cast<u64>(std::floor(v)); }

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// (N - 2q + 2d) mod p, all arguments reduced.
u64 shifted_residue(u64 n_mod_p, u64 q, u64 d, u64 p) {
    const u64 twice_q = (2 * (q % p)) % p;
    return (n_mod_p + p - twice_q + 2 * d) % p;
}

}  // namespace

BigNat smallest_odd_above_power_101_100(const BigNat& base) {
    // floor(base^(101/100)) = floor((base^101)^(1/100)); strictly greater means +1.
    BigNat n = iroot(pow(base, 101), 100) + BigNat(1);
    if (!n.is_odd()) n += BigNat(1);
    return n;
}

SieveProfile build_profile(double x, double c2, double C0, std::optional<BigNat> N) {
    if (!(x >= 50)) throw DomainError("build_profile: x must be >= 50");
    if (!(c2 > 0) || !(C0 > 1)) throw DomainError("build_profile: need c2 > 0 and C0 > 1");
    SieveProfile pr;
    pr.x = x;
    pr.c2 = c2;
    pr.C0 = C0;
    const double l1 = std::log(x);
    const double l2 = iterated_log(x, 2);
    const double l3 = iterated_log(x, 3);
    pr.y = c2 * x * l1 * l3 / l2;
    pr.z = std::pow(x, l3 / (4 * l2));
    pr.s_low = std::min(std::pow(l1, 20), std::sqrt(pr.z));

    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ProfileError("profile ordering violated: " + what);
    };
    require(pr.s_low < pr.z, "s_low < z (" + fmt_double(pr.s_low) + " vs " + fmt_double(pr.z) + ")");
    require(pr.z < x / 2, "z < x/2 (" + fmt_double(pr.z) + " vs " + fmt_double(x / 2) + ")");
    require(x < pr.y, "x < y (" + fmt_double(x) + " vs " + fmt_double(pr.y) + ")");
    require(pr.y <= C0 * x, "y <= C0*x (" + fmt_double(pr.y) + " vs " + fmt_double(C0 * x) + ")");

    if (N) {
        if (!N->is_odd()) throw DomainError("build_profile: N must be odd");
        require(*N > BigNat(2 * floor_u(pr.y) + 1), "N > 2y");
        pr.N = *N;
        pr.n_from_profile = false;
    } else {
        BigNat primorial(1);
        for_each_prime(2, floor_u(C0 * x), [&](u64 p) { primorial *= BigNat(p); });
        pr.N = smallest_odd_above_power_101_100(primorial);
        pr.n_from_profile = true;
    }
    pr.c1 = x / pr.N.log();
    return pr;
}

PrimeClasses classify_primes(const SieveProfile& profile, const PrimeTable& table) {
    if (table.bound() < floor_u(profile.y)) throw CoverageError("classify_primes: table does not reach y");
    PrimeClasses c;
    for (u64 p : table.range(2, floor_u(profile.z)))
        if (static_cast<double>(p) > profile.s_low) c.S.push_back(p);
    for (u64 p : table.range(2, floor_u(profile.x)))
        if (static_cast<double>(p) > profile.x / 2) c.P_mid.push_back(p);
    for (u64 p : table.range(floor_u(profile.x) + 1, floor_u(profile.y))) c.Q.push_back(p);

    // Disjointness is implied by s_low < z < x/2 < x; assert it anyway on the data.
    std::set<u64> seen;
    for (const auto* v : {&c.S, &c.P_mid, &c.Q})
        for (u64 p : *v)
            if (!seen.insert(p).second) throw ProfileError("classify_primes: classes overlap at " + std::to_string(p));
    return c;
}

std::vector<u64> select_qstar(const SieveProfile& profile, const PrimeTable& table) {
    std::vector<u64> small;
    for (u64 p : table.range(2, floor_u(profile.s_low))) small.push_back(p);
    std::vector<u64> out;
    for (u64 q : table.range(floor_u(profile.x) + 1, floor_u(profile.y))) {
        const double qd = static_cast<double>(q);
        if (!(qd > profile.y / 3 && qd <= 2 * profile.y / 3)) continue;
        bool ok = true;
        for (u64 p : small) {
            if (shifted_residue(profile.N.mod(p), q, 0, p) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(q);
    }
    if (out.empty()) throw ConstructionFailure("qstar", "Q* is empty; enlarge x");
    return out;
}

u64 ResidueSystem::d(u64 p) const {
    if (auto it = a.find(p); it != a.end()) return it->second;
    if (auto it = b.find(p); it != b.end()) return it->second;
    if (auto it = matched.find(p); it != matched.end()) return it->second;
    return 0;
}

namespace {

SiftResult sift_once(const SieveProfile& profile, const PrimeClasses& classes, const std::vector<u64>& s_order) {
    SiftResult r;
    std::vector<u64> surv = classes.Q;
    for (u64 s : s_order) {
        std::vector<u64> hits(s, 0);
        for (u64 q : surv) ++hits[q % s];
        const u64 best = static_cast<u64>(std::max_element(hits.begin(), hits.end()) - hits.begin());
        r.system.a[s] = best;
        std::erase_if(surv, [&](u64 q) { return q % s == best; });
    }
    for (u64 p : classes.P_mid) {
        if (surv.empty()) {
            r.system.b[p] = 0;
            continue;
        }
        const u64 cls = surv.back() % p;
        r.system.b[p] = cls;
        std::erase_if(surv, [&](u64 q) { return q % p == cls; });
    }
    r.q_survivors = surv;
    std::set<u64> left(surv.begin(), surv.end());
    const u64 zf = floor_u(profile.z);
    for (u64 n = floor_u(profile.x) + 1; n <= floor_u(profile.y); ++n)
        if (smooth::is_smooth(n, zf)) left.insert(n);
    r.leftover.assign(left.begin(), left.end());
    return r;
}

}  // namespace

SiftResult greedy_sift(const SieveProfile& profile, const PrimeClasses& classes, std::uint64_t seed,
                       unsigned restarts) {
    SiftResult best = sift_once(profile, classes, classes.S);
    std::mt19937_64 rng(seed);
    for (unsigned i = 0; i < restarts; ++i) {
        std::vector<u64> order = classes.S;
        std::shuffle(order.begin(), order.end(), rng);
        SiftResult cand = sift_once(profile, classes, order);
        if (cand.leftover.size() < best.leftover.size()) best = std::move(cand);
    }
    return best;
}

ExcludedSets excluded_sets(u64 q, const ResidueSystem& system, const PrimeClasses& classes,
                           const SieveProfile& profile, const PrimeTable& table) {
    ExcludedSets ex;
    auto bad_residue = [&](u64 p, u64 d) {
        return q % p == d || shifted_residue(profile.N.mod(p), q, d, p) == 0;
    };
    for (u64 s : classes.S)
        if (bad_residue(s, system.a.at(s))) ex.n1.push_back(s);
    for (u64 p : classes.P_mid)
        if (bad_residue(p, system.b.at(p))) ex.n2.push_back(p);
    for (u64 p : table.range(2, floor_u(profile.x)))
        if (static_cast<double>(p) > profile.s_low && shifted_residue(profile.N.mod(p), q, 0, p) == 0)
            ex.n3.push_back(p);
    return ex;
}

Q0Choice choose_q0(const std::vector<u64>& qstar, const ResidueSystem& system, const PrimeClasses& classes,
                   const SieveProfile& profile, const PrimeTable& table) {
    if (qstar.empty()) throw ConstructionFailure("q0", "choose_q0: Q* is empty");
    const double span = profile.y - profile.x;
    std::optional<Q0Choice> best;
    for (u64 q : qstar) {  // ascending, so strict < keeps the smallest q on ties
        Q0Choice c;
        c.q0 = q;
        c.excluded = excluded_sets(q, system, classes, profile, table);
        for (const auto* v : {&c.excluded.n1, &c.excluded.n2, &c.excluded.n3})
            for (u64 p : *v) c.score += span / static_cast<double>(p);
        if (!best || c.score < best->score) best = std::move(c);
    }
    return *best;
}

BigNat solve_v0(const std::vector<ResidueEntry>& residues) {
    std::vector<Congruence> cs;
    cs.reserve(residues.size());
    for (const auto& e : residues) cs.push_back({(e.p - e.d % e.p) % e.p, e.p});
    BigNat v0 = crt_solve(cs);
    if (v0 == BigNat(0)) throw ConstructionFailure("crt", "all residues vanish; v0 = 0 violates 1 <= v0 < P*");
    return v0;
}

IsolationCertificate assemble_certificate(const SieveProfile& profile, ResidueSystem system, const Q0Choice& choice,
                                          const PrimeTable& table) {
    const u64 q0 = choice.q0;
    const u64 xf = floor_u(profile.x);
    const u64 yf = floor_u(profile.y);
    const std::set<u64> n3(choice.excluded.n3.begin(), choice.excluded.n3.end());
    std::set<u64> reverted(choice.excluded.n1.begin(), choice.excluded.n1.end());
    reverted.insert(choice.excluded.n2.begin(), choice.excluded.n2.end());

    std::vector<ResidueEntry> residues;
    for (u64 p : table.range(2, xf)) {
        if (n3.count(p)) continue;
        residues.push_back({p, reverted.count(p) ? 0 : system.d(p)});
    }

    std::vector<u64> leftover;
    for (u64 j = xf + 1; j <= yf; ++j) {
        if (j == q0) continue;
        bool covered = std::any_of(residues.begin(), residues.end(), [&](const ResidueEntry& e) { return j % e.p == e.d; });
        if (!covered) leftover.push_back(j);
    }

    auto candidates = table.range(xf + 1, floor_u(profile.C0 * profile.x));
    std::vector<bool> used(candidates.size(), false);
    system.matched.clear();
    for (u64 n : leftover) {
        bool placed = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (used[i]) continue;
            const u64 p = candidates[i];
            const bool hits_q0 = (n % p) == (q0 % p);
            const bool hits_second = shifted_residue(profile.N.mod(p), q0, n % p, p) == 0;
            if (hits_q0 || hits_second) continue;
            used[i] = true;
            system.matched[p] = n % p;
            residues.push_back({p, n % p});
            placed = true;
            break;
        }
        if (!placed) {
            throw ConstructionFailure("match", "no admissible prime in (x, C0 x] for leftover " + std::to_string(n) +
                                                   " (" + std::to_string(leftover.size()) +
                                                   " leftovers); increase C0");
        }
    }

    IsolationCertificate cert;
    cert.profile = profile;
    cert.q0 = q0;
    cert.excluded = choice.excluded;
    cert.pstar = BigNat(1);
    for (const auto& e : residues) cert.pstar *= BigNat(e.p);
    cert.v0 = solve_v0(residues);
    cert.u0 = cert.v0 + BigNat(q0);
    cert.window = std::min(q0 - xf - 1, yf - q0);
    cert.residues = std::move(residues);

    auto& log = cert.construction_log;
    log.emplace_back("pstar_selection", "primes <= x minus N3; N1/N2 primes revert to d_p = 0");
    log.emplace_back("leftover_count", std::to_string(leftover.size()));
    log.emplace_back("matched_primes", std::to_string(system.matched.size()));
    log.emplace_back("pstar_prime_factors", std::to_string(cert.residues.size()));
    log.emplace_back("pstar_digits", std::to_string(cert.pstar.decimal_digits()));
    log.emplace_back("n_digits", std::to_string(profile.N.decimal_digits()));
    log.emplace_back("n_mode", profile.n_from_profile ? "profile-first" : "literal");
    const double log_p = cert.pstar.log();
    const double log_n = profile.N.log();
    log.emplace_back("log_u0_over_log_pstar", fmt_double(cert.u0.log() / log_p));
    log.emplace_back("n_ge_pstar_pow_100", log_n >= 100 * log_p ? "satisfied" : "unsatisfied");
    log.emplace_back("log_n_over_log_pstar", fmt_double(log_n / log_p));
    log.emplace_back("score", fmt_double(choice.score));
    return cert;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

u64 measure_radius(const BigNat& u0, const BigNat& pstar, u64 cap) {
    const mpz_class& u = u0.raw();
    const mpz_class& P = pstar.raw();
    mpz_class m, g;
    for (u64 k = 1; k <= cap; ++k) {
        m = u + static_cast<unsigned long>(k);
        mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), P.get_mpz_t());
        if (g == 1) return k - 1;
        if (u > static_cast<unsigned long>(k)) {
            m = u - static_cast<unsigned long>(k);
            mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), P.get_mpz_t());
            if (g == 1) return k - 1;
        }
    }
    return cap;
}

VerificationReport verify_certificate(const IsolationCertificate& cert) {
    VerificationReport rep;
    auto add = [&](std::string name, bool ok, std::string witness = {}) {
        rep.checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(witness)});
    };
    const mpz_class& P = cert.pstar.raw();

    {
        BigNat prod(1);
        std::set<u64> seen;
        std::string bad;
        for (const auto& e : cert.residues) {
            if (!is_prime_u64(e.p)) bad = "non-prime factor " + std::to_string(e.p);
            else if (!seen.insert(e.p).second) bad = "repeated factor " + std::to_string(e.p);
            if (!bad.empty()) break;
            prod *= BigNat(e.p);
        }
        if (bad.empty() && !(prod == cert.pstar)) bad = "product of listed primes " + prod.to_decimal() + " != P*";
        add("factors_multiply_to_pstar", bad.empty(), bad);
    }
    {
        std::string bad;
        for (const auto& e : cert.residues) {
            if (e.d >= e.p || (cert.v0.mod(e.p) + e.d) % e.p != 0) {
                bad = "v0 + d_p != 0 mod " + std::to_string(e.p) + " (d_p = " + std::to_string(e.d) + ")";
                break;
            }
        }
        add("residues_match_v0", bad.empty(), bad);
    }
    add("v0_in_range", cert.v0 >= BigNat(1) && cert.v0 < cert.pstar, "v0 = " + cert.v0.to_decimal());
    add("u0_is_v0_plus_q0", cert.u0 == cert.v0 + BigNat(cert.q0), "u0 - v0 != q0");

    {
        const BigNat g = gcd(cert.u0, cert.pstar);
        add("gcd_u0_pstar", g == BigNat(1), g.to_decimal());
    }
    {
        mpz_class diff = cert.profile.N.raw() - 2 * cert.u0.raw();
        diff = abs(diff);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), P.get_mpz_t());
        add("gcd_n_minus_2u0_pstar", g == 1, g.get_str());
    }
    {
        const u64 lo = floor_u(cert.profile.x) + 1;
        const u64 hi = floor_u(cert.profile.y);
        const u64 n = hi >= lo ? hi - lo + 1 : 0;
        constexpr u64 kBlock = 256;
        const u64 blocks = (n + kBlock - 1) / kBlock;
        std::vector<std::optional<u64>> first_bad(blocks);
        parallel_for(blocks, [&](std::size_t b) {
            mpz_class m, g;
            for (u64 j = lo + b * kBlock; j < std::min(hi + 1, lo + (b + 1) * kBlock); ++j) {
                if (j == cert.q0) continue;
                m = cert.v0.raw() + static_cast<unsigned long>(j);
                mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), P.get_mpz_t());
                if (g == 1) {
                    first_bad[b] = j;
                    return;
                }
            }
        });
        std::string witness;
        for (const auto& fb : first_bad)
            if (fb) {
                witness = "gcd(v0 + " + std::to_string(*fb) + ", P*) = 1";
                break;
            }
        add("window_cover", witness.empty(), witness);
    }
    rep.verified_radius = measure_radius(cert.u0, cert.pstar);
    add("window_radius", rep.verified_radius >= cert.window,
        "measured radius " + std::to_string(rep.verified_radius) + " < claimed " + std::to_string(cert.window));
    return rep;
}

ConstructionResult construct(const SieveProfile& profile, const PrimeTable& table, std::uint64_t seed) {
    if (table.bound() < floor_u(std::max(profile.y, profile.C0 * profile.x)))
        throw CoverageError("construct: prime table must reach max(y, C0 x)");
    ConstructionResult r;
    r.classes = classify_primes(profile, table);
    r.qstar = select_qstar(profile, table);
    r.sift = greedy_sift(profile, r.classes, seed);
    r.choice = choose_q0(r.qstar, r.sift.system, r.classes, profile, table);
    r.certificate = assemble_certificate(profile, r.sift.system, r.choice, table);
    auto& log = r.certificate.construction_log;
    log.insert(log.begin(), {"S", std::to_string(r.classes.S.size())});
    log.insert(log.begin() + 1, {"P_mid", std::to_string(r.classes.P_mid.size())});
    log.insert(log.begin() + 2, {"Q", std::to_string(r.classes.Q.size())});
    log.insert(log.begin() + 3, {"qstar", std::to_string(r.qstar.size())});
    log.insert(log.begin() + 4, {"sift_q_survivors", std::to_string(r.sift.q_survivors.size())});
    log.insert(log.begin() + 5, {"sift_leftover", std::to_string(r.sift.leftover.size())});
    return r;
}

}  // namespace isoprime::cover
