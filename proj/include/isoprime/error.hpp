#pragma once

#include <stdexcept>
#include <string>

namespace isoprime {

// Precondition on an argument violated (n = 0, even N, bad modulus, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A PrimeTable does not reach far enough for the requested query.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-coprime moduli handed to CRT.
struct ConflictError : std::runtime_error {
    ConflictError(const std::string& what, unsigned long long m1, unsigned long long m2)
        : std::runtime_error(what), first(m1), second(m2) {}
    unsigned long long first;
    unsigned long long second;
};

// Sieve profile parameters violate the ordering chain.
struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A construction stage could not produce its output (empty Q*, infeasible matching, ...).
struct ConstructionFailure : std::runtime_error {
    ConstructionFailure(std::string stage_name, const std::string& what)
        : std::runtime_error(what), stage(std::move(stage_name)) {}
    std::string stage;
};

// Requested work exceeds the documented feasibility caps.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace isoprime
