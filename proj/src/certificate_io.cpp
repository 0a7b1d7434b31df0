#include "isoprime/certificate_io.hpp"

#include "isoprime/error.hpp"

namespace isoprime::cover {

using nlohmann::ordered_json;

namespace {

ordered_json dec_list(const std::vector<u64>& v) {
    ordered_json a = ordered_json::array();
    for (u64 x : v) a.push_back(std::to_string(x));
    return a;
}

u64 parse_u64(const ordered_json& j, const char* what) {
    if (!j.is_string()) throw DomainError(std::string("certificate: ") + what + " must be a decimal string");
    return BigNat::from_decimal(j.get<std::string>()).to_u64();
}

std::vector<u64> parse_list(const ordered_json& j, const char* what) {
    if (!j.is_array()) throw DomainError(std::string("certificate: ") + what + " must be an array");
    std::vector<u64> out;
    for (const auto& e : j) out.push_back(parse_u64(e, what));
    return out;
}

const ordered_json& field(const ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("certificate: missing field '") + key + "'");
    return j.at(key);
}

double parse_real(const ordered_json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number()) throw DomainError(std::string("certificate: ") + key + " must be a number");
    return v.get<double>();
}

}  // namespace

ordered_json to_json(const IsolationCertificate& c) {
    ordered_json j;
    j["profile"] = {
        {"x", c.profile.x},   {"y", c.profile.y},   {"z", c.profile.z},   {"s_low", c.profile.s_low},
        {"c1", c.profile.c1}, {"c2", c.profile.c2}, {"C0", c.profile.C0},
        {"n_mode", c.profile.n_from_profile ? "profile-first" : "literal"},
    };
    j["q0"] = std::to_string(c.q0);
    j["excluded"] = {{"n1", dec_list(c.excluded.n1)}, {"n2", dec_list(c.excluded.n2)}, {"n3", dec_list(c.excluded.n3)}};
    j["pstar_dec"] = c.pstar.to_decimal();
    j["v0_dec"] = c.v0.to_decimal();
    j["u0_dec"] = c.u0.to_decimal();
    j["n_dec"] = c.profile.N.to_decimal();
    j["window"] = std::to_string(c.window);
    ordered_json log = ordered_json::object();
    for (const auto& [k, v] : c.construction_log) log[k] = v;
    j["construction_log"] = log;
    ordered_json res = ordered_json::array();
    for (const auto& e : c.residues) res.push_back({std::to_string(e.p), std::to_string(e.d)});
    j["residues"] = res;
    return j;
}

ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["passed"] = r.passed();
    j["verified_radius"] = std::to_string(r.verified_radius);
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    j["checks"] = checks;
    return j;
}

IsolationCertificate certificate_from_json(const ordered_json& j) {
    IsolationCertificate c;
    const auto& pr = field(j, "profile");
    c.profile.x = parse_real(pr, "x");
    c.profile.y = parse_real(pr, "y");
    c.profile.z = parse_real(pr, "z");
    c.profile.s_low = parse_real(pr, "s_low");
    c.profile.c1 = parse_real(pr, "c1");
    c.profile.c2 = parse_real(pr, "c2");
    c.profile.C0 = parse_real(pr, "C0");
    c.profile.n_from_profile = field(pr, "n_mode") == "profile-first";
    c.q0 = parse_u64(field(j, "q0"), "q0");
    const auto& ex = field(j, "excluded");
    c.excluded.n1 = parse_list(field(ex, "n1"), "n1");
    c.excluded.n2 = parse_list(field(ex, "n2"), "n2");
    c.excluded.n3 = parse_list(field(ex, "n3"), "n3");
    auto big = [&](const char* key) {
        const auto& v = field(j, key);
        if (!v.is_string()) throw DomainError(std::string("certificate: ") + key + " must be a decimal string");
        return BigNat::from_decimal(v.get<std::string>());
    };
    c.pstar = big("pstar_dec");
    c.v0 = big("v0_dec");
    c.u0 = big("u0_dec");
    c.profile.N = big("n_dec");
    c.window = parse_u64(field(j, "window"), "window");
    const auto& log = field(j, "construction_log");
    if (!log.is_object()) throw DomainError("certificate: construction_log must be an object");
    for (const auto& [k, v] : log.items()) c.construction_log.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    for (const auto& e : field(j, "residues")) {
        if (!e.is_array() || e.size() != 2) throw DomainError("certificate: residues entries must be [p, d]");
        c.residues.push_back({parse_u64(e[0], "residue prime"), parse_u64(e[1], "residue")});
    }
    return c;
}

std::string dump_certificate(const IsolationCertificate& cert, const VerificationReport* report) {
    ordered_json j = to_json(cert);
    if (report) j["verification"] = to_json(*report);
    return j.dump(2) + "\n";
}

IsolationCertificate parse_certificate(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("certificate: invalid JSON: ") + e.what());
    }
    return certificate_from_json(j);
}

}  // namespace isoprime::cover
