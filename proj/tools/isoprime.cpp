// isoprime: scan, construct, verify, ratio.
//
// Exit codes: 0 success, 2 usage error, 3 construction or verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isoprime/certificate_io.hpp"
#include "isoprime/circle.hpp"
#include "isoprime/cover.hpp"
#include "isoprime/error.hpp"
#include "isoprime/isolation.hpp"
#include "isoprime/parallel.hpp"
#include "isoprime/singular.hpp"

namespace {

using namespace isoprime;

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kFailure = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to --out when given, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::vector<u64> parse_u64_list(const std::string& text) {
    std::vector<u64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("expected a comma-separated list of naturals, got '" + text + "'");
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

struct ScanArgs {
    u64 from = 0, to = 0;
    std::string g = "ford:0.1";
    std::string out;
    bool isolated_only = false;
};

int run_scan(const ScanArgs& a) {
    if (a.from > a.to) throw UsageError("scan: --from must not exceed --to");
    isolation::GFunction g;
    try {
        g = isolation::GFunction::parse(a.g);
    } catch (const DomainError& e) {
        throw UsageError(std::string("scan: ") + e.what());
    }
    Sink sink(a.out);
    auto& os = sink.os();
    os << "p,radius,threshold,isolated\n";
    isolation::scan_isolated(a.from, a.to, g, [&](const isolation::IsolationReport& r) {
        if (a.isolated_only && !r.isolated) return;
        os << r.p << ',' << r.radius << ',' << fixed(r.threshold, 6) << ',' << (r.isolated ? 1 : 0) << '\n';
    });
    return kOk;
}

struct ConstructArgs {
    double x = 300, c2 = 1, C0 = 4;
    std::string N;  // decimal; empty means derived from the profile
    std::uint64_t seed = 0;
    std::string out;
};

int run_construct(const ConstructArgs& a) {
    cover::SieveProfile profile;
    try {
        std::optional<BigNat> N;
        if (!a.N.empty()) N = BigNat::from_decimal(a.N);
        profile = cover::build_profile(a.x, a.c2, a.C0, N);
    } catch (const ProfileError& e) {
        std::cerr << "construct failed at stage profile: " << e.what() << '\n';
        return kFailure;
    } catch (const DomainError& e) {
        std::cerr << "construct failed at stage profile: " << e.what() << '\n';
        return kFailure;
    }
    const auto bound = static_cast<u64>(std::ceil(std::max(profile.y, profile.C0 * profile.x))) + 1000;
    const auto table = sieve_primes(bound);
    cover::ConstructionResult result;
    try {
        result = cover::construct(profile, table, a.seed);
    } catch (const ConstructionFailure& e) {
        std::cerr << "construct failed at stage " << e.stage << ": " << e.what() << '\n';
        return kFailure;
    }
    const auto report = cover::verify_certificate(result.certificate);
    Sink sink(a.out);
    sink.os() << cover::dump_certificate(result.certificate, &report);
    if (!report.passed()) {
        for (const auto& c : report.checks)
            if (!c.pass) std::cerr << "verification failed: " << c.name << ' ' << c.witness << '\n';
        return kFailure;
    }
    return kOk;
}

struct VerifyArgs {
    std::string in;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    std::ifstream f(a.in, std::ios::binary);
    if (!f) throw UsageError("verify: cannot read '" + a.in + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    cover::IsolationCertificate cert;
    try {
        cert = cover::parse_certificate(buf.str());
    } catch (const std::exception& e) {
        std::cerr << "verify: malformed certificate: " << e.what() << '\n';
        return kFailure;
    }
    const auto report = cover::verify_certificate(cert);
    Sink sink(a.out);
    sink.os() << cover::to_json(report).dump(2) << '\n';
    return report.passed() ? kOk : kFailure;
}

struct RatioArgs {
    std::string Ns;
    u64 r = 1;
    std::string b;  // empty: (1, 1, N - 2) mod r per N
    u64 qmax = 10'000;
    u64 prime_bound = 100'000;
    std::string out;
};

int run_ratio(const RatioArgs& a) {
    const auto Ns = parse_u64_list(a.Ns);
    if (a.r == 0) throw UsageError("ratio: --r must be >= 1");
    std::optional<singular::Residues> fixed_b;
    if (!a.b.empty()) {
        const auto v = parse_u64_list(a.b);
        if (v.size() != 3) throw UsageError("ratio: --b needs three residues");
        for (u64 bi : v)
            if (std::gcd(bi % a.r, a.r) != 1) throw UsageError("ratio: each residue must be coprime to r");
        fixed_b = singular::Residues{v[0] % a.r, v[1] % a.r, v[2] % a.r};
    }
    for (u64 N : Ns)
        if (N > 2'000'000) throw UsageError("ratio: N above 2000000");

    Sink sink(a.out);
    auto& os = sink.os();
    os << "N,r,count,predicted,ratio,sigma_qsum,sigma_local,sigma_diff,flag\n";
    for (u64 N : Ns) {
        singular::Residues b = fixed_b.value_or(singular::Residues{1 % a.r, 1 % a.r, (N + 2 * a.r - 2) % a.r});
        std::string flag = "ok";
        bool units = true;
        for (u64 bi : {b.b1, b.b2, b.b3})
            if (std::gcd(bi, a.r) != 1) units = false;
        if (!units) {
            os << N << ',' << a.r << ",0,0,nan,nan,nan,nan,nonunit_residue\n";
            continue;
        }
        const auto t = circle::theorem33_ratio(N, a.r, b, a.prime_bound);
        const auto s = singular::sigma_qsum(N, a.r, b, a.qmax);
        const double diff = std::abs(s.qsum - t.count.sigma);
        if (!t.count.compatible)
            flag = "incompatible";
        else if (t.flagged)
            flag = "zero_sigma";
        os << N << ',' << a.r << ',' << fixed(t.count.weighted_count, 6) << ',' << fixed(t.count.predicted, 6) << ','
           << fixed(t.ratio, 9) << ',' << fixed(s.qsum, 12) << ',' << fixed(t.count.sigma, 12) << ',' << sci(diff)
           << ',' << flag << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isolated primes, covering certificates and ternary circle-method experiments"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: ISOPRIME_THREADS or all cores)");

    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("scan", "List primes in a range with their isolation radius");
    scan_cmd->add_option("--from", scan.from, "Lower end of the range")->required();
    scan_cmd->add_option("--to", scan.to, "Upper end of the range")->required();
    scan_cmd->add_option("--g", scan.g, "const:L | g:c | rankin:C | ford:C")->capture_default_str();
    scan_cmd->add_flag("--isolated-only", scan.isolated_only, "Only emit isolated primes");
    scan_cmd->add_option("--out", scan.out, "CSV output path (default stdout)");

    ConstructArgs cons;
    auto* cons_cmd = app.add_subcommand("construct", "Build and verify an isolation certificate");
    cons_cmd->add_option("--x", cons.x, "Sieve scale x")->capture_default_str();
    cons_cmd->add_option("--c2", cons.c2, "Constant in y")->capture_default_str();
    cons_cmd->add_option("--C0", cons.C0, "Matching primes lie in (x, C0 x]")->capture_default_str();
    cons_cmd->add_option("--N", cons.N, "Odd N in decimal (default: derived from the profile)");
    cons_cmd->add_option("--seed", cons.seed, "Seed for greedy restarts")->capture_default_str();
    cons_cmd->add_option("--out", cons.out, "Certificate JSON path (default stdout)");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Check a certificate file");
    ver_cmd->add_option("--in", ver.in, "Certificate JSON")->required();
    ver_cmd->add_option("--out", ver.out, "Report JSON path (default stdout)");

    RatioArgs rat;
    auto* rat_cmd = app.add_subcommand("ratio", "Weighted ternary counts against the singular-series prediction");
    rat_cmd->add_option("--N", rat.Ns, "Comma-separated list of N <= 2000000")->required();
    rat_cmd->add_option("--r", rat.r, "Progression modulus")->capture_default_str();
    rat_cmd->add_option("--b", rat.b, "b1,b2,b3 (default 1,1,N-2 mod r)");
    rat_cmd->add_option("--qmax", rat.qmax, "Truncation of the q-sum")->capture_default_str();
    rat_cmd->add_option("--prime-bound", rat.prime_bound, "Last prime in the local product")->capture_default_str();
    rat_cmd->add_option("--out", rat.out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (threads > 0) set_thread_count(threads);

    try {
        if (*scan_cmd) return run_scan(scan);
        if (*cons_cmd) return run_construct(cons);
        if (*ver_cmd) return run_verify(ver);
        if (*rat_cmd) return run_ratio(rat);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
