#include "isoprime/circle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include "isoprime/characters.hpp"
#include "isoprime/error.hpp"
#include "isoprime/parallel.hpp"

namespace isoprime::circle {

namespace {

using characters::unit_root;

// FFTW's planner is not re-entrant.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct Kahan {
    double sum = 0, c = 0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

std::complex<double> e_frac(long double x) {
    x -= std::floor(x);
    const long double t = 2.0L * std::numbers::pi_v<long double> * x;
    return {static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t))};
}

void check_progression(u64 r, u64 b) {
    if (r == 0) throw DomainError("progression modulus must be >= 1");
    if (b >= r) throw DomainError("progression residue must satisfy 0 <= b < r");
}

std::vector<double> masked_lambda(const std::vector<double>& lam, u64 N, u64 r, u64 b) {
    std::vector<double> out(N + 1, 0.0);
    for (u64 n = b == 0 ? r : b; n <= N; n += r) out[n] = lam[n];
    return out;
}

// Linear convolution of two real sequences through a real FFT.
std::vector<double> convolve(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t need = x.size() + y.size() - 1;
    std::size_t len = 1;
    while (len < need) len <<= 1;
    const std::size_t nc = len / 2 + 1;
    double* in = fftw_alloc_real(len);
    fftw_complex* fx = fftw_alloc_complex(nc);
    fftw_complex* fy = fftw_alloc_complex(nc);
    fftw_plan px, py, pb;
    {
        std::lock_guard lock(plan_mutex());
        px = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fx, FFTW_ESTIMATE);
        py = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fy, FFTW_ESTIMATE);
        pb = fftw_plan_dft_c2r_1d(static_cast<int>(len), fx, in, FFTW_ESTIMATE);
    }
    std::fill(in, in + len, 0.0);
    std::copy(x.begin(), x.end(), in);
    fftw_execute(px);
    std::fill(in, in + len, 0.0);
    std::copy(y.begin(), y.end(), in);
    fftw_execute(py);
    for (std::size_t i = 0; i < nc; ++i) {
        const double re = fx[i][0] * fy[i][0] - fx[i][1] * fy[i][1];
        const double im = fx[i][0] * fy[i][1] + fx[i][1] * fy[i][0];
        fx[i][0] = re;
        fx[i][1] = im;
    }
    fftw_execute(pb);
    std::vector<double> out(need);
    for (std::size_t i = 0; i < need; ++i) out[i] = in[i] / static_cast<double>(len);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(px);
        fftw_destroy_plan(py);
        fftw_destroy_plan(pb);
    }
    fftw_free(in);
    fftw_free(fx);
    fftw_free(fy);
    return out;
}

bool compatible(u64 N, u64 r, const singular::Residues& b) { return (b.b1 + b.b2 + b.b3) % r == N % r; }

}  // namespace

std::complex<double> exp_sum(double alpha, u64 r, u64 b, u64 N) {
    check_progression(r, b);
    if (N == 0) return {0.0, 0.0};
    const auto lam = von_mangoldt_table(N);
    Kahan re, im;
    const long double al = alpha - std::floor(static_cast<long double>(alpha));
    for (u64 n = b == 0 ? r : b; n <= N; n += r) {
        if (lam[n] == 0) continue;
        const auto w = e_frac(static_cast<long double>(n) * al);
        re.add(lam[n] * w.real());
        im.add(lam[n] * w.imag());
    }
    return {re.sum, im.sum};
}

std::complex<double> exp_sum_rational(u64 a, u64 q, double lambda, u64 r, u64 b, u64 N) {
    check_progression(r, b);
    if (q == 0) throw DomainError("exp_sum_rational: q must be >= 1");
    if (N == 0) return {0.0, 0.0};
    const auto lam = von_mangoldt_table(N);
    Kahan re, im;
    const u64 am = a % q;
    for (u64 n = b == 0 ? r : b; n <= N; n += r) {
        if (lam[n] == 0) continue;
        const long double frac = static_cast<long double>(mul_mod(n % q, am, q)) / static_cast<long double>(q) +
                                 static_cast<long double>(n) * static_cast<long double>(lambda);
        const auto w = e_frac(frac);
        re.add(lam[n] * w.real());
        im.add(lam[n] * w.imag());
    }
    return {re.sum, im.sum};
}

ArcParams make_arc_params(u64 N, double R, double C) {
    if (N < 3 || !(R >= 1)) throw DomainError("make_arc_params: need N >= 3 and R >= 1");
    ArcParams p;
    p.N = N;
    p.R_scale = R;
    p.L = std::log(static_cast<double>(N));
    p.C_exp = C;
    p.p_bound = R * R * R * std::pow(p.L, 3 * C);
    p.q_bound = static_cast<double>(N) / (R * R * R) * std::pow(p.L, -4 * C);
    if (!(2 * p.p_bound < p.q_bound)) throw DomainError("make_arc_params: need 2P < Q");
    return p;
}

ArcParams make_arc_params_explicit(u64 N, double p_bound, double q_bound) {
    if (!(p_bound >= 1) || !(2 * p_bound < q_bound)) throw DomainError("make_arc_params_explicit: need 1 <= P, 2P < Q");
    ArcParams p;
    p.N = N;
    p.L = N > 1 ? std::log(static_cast<double>(N)) : 0.0;
    p.p_bound = p_bound;
    p.q_bound = q_bound;
    return p;
}

ArcClass classify_arc(double alpha, const ArcParams& params) {
    const double Q = params.q_bound;
    if (!(alpha >= 1 / Q) || !(alpha <= 1 + 1 / Q)) throw DomainError("classify_arc: alpha outside [1/Q, 1 + 1/Q]");
    const auto qmax = static_cast<u64>(std::floor(Q));
    const long double x = alpha;

    // Convergents h_k / k_k of alpha with k_k <= qmax.
    struct Conv {
        u64 a, q;
    };
    std::vector<Conv> convs;
    long double rest = x;
    u64 h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    for (int step = 0; step < 64; ++step) {
        const long double fl = std::floor(rest);
        // Bound k before forming it; a huge partial quotient would wrap u64.
        if (fl * static_cast<long double>(k_prev) + static_cast<long double>(k_prev2) > static_cast<long double>(qmax)) break;
        const auto c = static_cast<u64>(fl);
        const u64 h = c * h_prev + h_prev2;
        const u64 k = c * k_prev + k_prev2;
        if (k > qmax) break;
        convs.push_back({h, k});
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        const long double frac = rest - fl;
        if (frac < 1e-18L) break;
        rest = 1 / frac;
        if (rest > 1e18L) break;
    }

    auto make = [&](u64 a, u64 q) {
        ArcClass out;
        if (a == 0 || a > q) {
            // Only the ends of the window land here; a = q = 1 covers them.
            a = 1;
            q = 1;
        }
        out.approx.a = a;
        out.approx.q = q;
        out.approx.lambda = static_cast<double>(x - static_cast<long double>(a) / static_cast<long double>(q));
        return out;
    };

    for (const auto& cv : convs) {
        if (static_cast<double>(cv.q) > params.p_bound) break;
        auto c = make(cv.a, cv.q);
        if (std::abs(c.approx.lambda) <= 1 / (static_cast<double>(c.approx.q) * Q)) {
            c.kind = ArcKind::major;
            return c;
        }
    }
    const auto& last = convs.back();
    auto c = make(last.a, last.q);
    const bool near = std::abs(c.approx.lambda) <= 1 / (static_cast<double>(c.approx.q) * Q);
    c.kind = static_cast<double>(c.approx.q) <= params.p_bound && near ? ArcKind::major : ArcKind::minor;
    return c;
}

CharacterExpansion character_expansion(u64 a, u64 q, double lambda, u64 r, u64 b, u64 N) {
    if (q == 0 || r == 0) throw DomainError("character_expansion: q, r must be >= 1");
    if (std::gcd(a, q) != 1) throw DomainError("character_expansion: gcd(a, q) must be 1");
    if (std::gcd(b, r) != 1) throw DomainError("character_expansion: gcd(b, r) must be 1");
    if (r * q > 10'000) throw ResourceError("character_expansion: r q above 10^4");
    const auto split = characters::gcd_split(r, q);
    const u64 r1 = r / split.h1;
    const u64 q1 = q / split.h2;
    const characters::CharacterGroup gr(r1), gq(q1);
    const auto xis = gr.all();
    const auto etas = gq.all();

    // T[c1][c2] = sum of Lambda(n) e(n lambda) over n = c1 (r1), n = c2 (q1).
    const auto lam = von_mangoldt_table(N);
    std::vector<std::complex<double>> T(r1 * q1);
    {
        std::vector<Kahan> re(r1 * q1), im(r1 * q1);
        for (u64 n = 2; n <= N; ++n) {
            if (lam[n] == 0 || std::gcd(n, r1 * q1) != 1) continue;
            const auto w = e_frac(static_cast<long double>(n) * static_cast<long double>(lambda));
            const std::size_t idx = (n % r1) * q1 + n % q1;
            re[idx].add(lam[n] * w.real());
            im[idx].add(lam[n] * w.imag());
        }
        for (std::size_t i = 0; i < T.size(); ++i) T[i] = {re[i].sum, im[i].sum};
    }

    std::vector<std::complex<double>> G(etas.size());
    for (std::size_t j = 0; j < etas.size(); ++j) G[j] = characters::gauss_sum(split.h, b % split.h, a, etas[j].conj(), q);

    std::vector<std::vector<std::complex<double>>> eta_val(etas.size(), std::vector<std::complex<double>>(q1));
    for (std::size_t j = 0; j < etas.size(); ++j)
        for (u64 c = 0; c < q1; ++c) eta_val[j][c] = etas[j](c);

    const double norm = static_cast<double>(gr.size()) * static_cast<double>(gq.size());
    CharacterExpansion out;
    std::vector<std::complex<double>> U(q1);
    for (const auto& xi : xis) {
        std::fill(U.begin(), U.end(), std::complex<double>{});
        for (u64 c1 = 0; c1 < r1; ++c1) {
            const auto v = xi(c1);
            if (v == std::complex<double>{}) continue;
            for (u64 c2 = 0; c2 < q1; ++c2) U[c2] += v * T[c1 * q1 + c2];
        }
        const auto xb = std::conj(xi(b % r1));
        for (std::size_t j = 0; j < etas.size(); ++j) {
            std::complex<double> V{};
            for (u64 c2 = 0; c2 < q1; ++c2) V += eta_val[j][c2] * U[c2];
            const auto term = xb * G[j] * V / norm;
            if (!xi.is_principal())
                out.S2 += term;
            else if (!etas[j].is_principal())
                out.S1 += term;
            else
                out.S0 += term;
        }
    }
    return out;
}

RepCount rep_count_direct(u64 N, u64 r, singular::Residues b, u64 prime_bound) {
    if (N > 2'000'000) throw ResourceError("rep_count_direct: N above 2e6");
    check_progression(r, b.b1);
    check_progression(r, b.b2);
    check_progression(r, b.b3);
    RepCount rc;
    rc.N = N;
    rc.r = r;
    rc.b = b;
    rc.compatible = compatible(N, r, b);
    const auto sig = singular::sigma_local(N, r, b, prime_bound);
    rc.sigma = sig.local_product;
    rc.predicted = 0.5 * rc.sigma * static_cast<double>(N) * static_cast<double>(N);
    if (!rc.compatible || N < 3) return rc;
    const auto lam = von_mangoldt_table(N);
    const auto A1 = masked_lambda(lam, N, r, b.b1);
    const auto A2 = masked_lambda(lam, N, r, b.b2);
    const auto A3 = masked_lambda(lam, N, r, b.b3);
    const auto C = convolve(A1, A2);
    Kahan acc;
    for (u64 m = 0; m <= N; ++m)
        if (A3[N - m] != 0) acc.add(C[m] * A3[N - m]);
    rc.weighted_count = std::max(0.0, acc.sum);
    return rc;
}

double rep_count_naive(u64 N, u64 r, singular::Residues b) {
    check_progression(r, b.b1);
    check_progression(r, b.b2);
    check_progression(r, b.b3);
    if (N < 3) return 0.0;
    const auto lam = von_mangoldt_table(N);
    Kahan acc;
    for (u64 n1 = b.b1 == 0 ? r : b.b1; n1 < N; n1 += r) {
        if (lam[n1] == 0) continue;
        for (u64 n2 = b.b2 == 0 ? r : b.b2; n1 + n2 < N; n2 += r) {
            if (lam[n2] == 0) continue;
            const u64 n3 = N - n1 - n2;
            if (n3 % r == b.b3) acc.add(lam[n1] * lam[n2] * lam[n3]);
        }
    }
    return acc.sum;
}

double rep_count_integral(u64 N, u64 r, singular::Residues b) {
    check_progression(r, b.b1);
    check_progression(r, b.b2);
    check_progression(r, b.b3);
    if (N > 2'000'000) throw ResourceError("rep_count_integral: N above 2e6");
    if (N < 3) return 0.0;
    const auto lam = von_mangoldt_table(N);
    const std::size_t M = 3 * N + 1;
    fftw_complex* buf = fftw_alloc_complex(M);
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    // S_i(j / M) = sum_n A_i[n] e(nj/M): FFTW's backward transform.
    std::vector<std::vector<std::complex<double>>> S;
    for (u64 bi : {b.b1, b.b2, b.b3}) {
        const auto A = masked_lambda(lam, N, r, bi);
        for (std::size_t i = 0; i < M; ++i) {
            buf[i][0] = i <= N ? A[i] : 0.0;
            buf[i][1] = 0.0;
        }
        fftw_execute(plan);
        std::vector<std::complex<double>> s(M);
        for (std::size_t i = 0; i < M; ++i) s[i] = {buf[i][0], buf[i][1]};
        S.push_back(std::move(s));
    }
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    Kahan re;
    for (std::size_t j = 0; j < M; ++j) {
        const auto w = unit_root(-static_cast<i64>((N * j) % M), M);
        re.add((S[0][j] * S[1][j] * S[2][j] * w).real());
    }
    return re.sum / static_cast<double>(M);
}

Theorem33Ratio theorem33_ratio(u64 N, u64 r, singular::Residues b, u64 prime_bound) {
    Theorem33Ratio t;
    t.count = rep_count_direct(N, r, b, prime_bound);
    if (t.count.predicted == 0 || !t.count.compatible) {
        t.flagged = true;
        t.ratio = std::numeric_limits<double>::quiet_NaN();
        return t;
    }
    t.ratio = t.count.weighted_count / t.count.predicted;
    return t;
}

BalogPerelliReport balog_perelli_probe(const std::vector<BalogPerelliSample>& samples) {
    BalogPerelliReport rep;
    rep.rows.resize(samples.size());
    for (const auto& s : samples) {
        if (s.M > 1'000'000) throw ResourceError("balog_perelli_probe: M above 1e6");
        if (s.q == 0 || s.r == 0 || s.r * s.q > 10'000) throw ResourceError("balog_perelli_probe: need r q <= 1e4");
        if (s.M < 3) throw DomainError("balog_perelli_probe: M must be >= 3");
    }
    parallel_for(samples.size(), [&](std::size_t i) {
        const auto& s = samples[i];
        BalogPerelliRow row;
        row.sample = s;
        row.sum_abs = std::abs(exp_sum_rational(s.a, s.q, 0.0, s.r, s.b % s.r, s.M));
        const double L = std::log(static_cast<double>(s.M));
        const double L3 = L * L * L;
        const double h = static_cast<double>(std::gcd(s.r, s.q));
        const double M = static_cast<double>(s.M), q = static_cast<double>(s.q), r = static_cast<double>(s.r);
        row.terms[0] = L3 * h * M / (r * std::sqrt(q));
        row.terms[1] = L3 * std::sqrt(q) * std::sqrt(M) / std::sqrt(h);
        row.terms[2] = L3 * std::pow(M, 0.8) / std::pow(r, 0.4);
        row.bound = row.terms[0] + row.terms[1] + row.terms[2];
        row.ratio = row.sum_abs / row.bound;
        row.dominant = static_cast<int>(std::max_element(row.terms, row.terms + 3) - row.terms);
        rep.rows[i] = row;
    });
    for (const auto& row : rep.rows) rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    return rep;
}

}  // namespace isoprime::circle
