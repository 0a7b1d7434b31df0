#pragma once

// Certificate <-> JSON. Integers are decimal strings, keys keep a fixed order.

#include <string>

#include "isoprime/cover.hpp"
#include "json.hpp"

namespace isoprime::cover {

nlohmann::ordered_json to_json(const IsolationCertificate& cert);
nlohmann::ordered_json to_json(const VerificationReport& report);

/// Throws DomainError on a missing or malformed field.
IsolationCertificate certificate_from_json(const nlohmann::ordered_json& j);

std::string dump_certificate(const IsolationCertificate& cert, const VerificationReport* report = nullptr);
IsolationCertificate parse_certificate(const std::string& text);

}  // namespace isoprime::cover
