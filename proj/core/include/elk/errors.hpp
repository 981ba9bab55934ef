#pragma once

#include <stdexcept>
#include <string>

namespace elk {

// Error taxonomy mirrors the CLI exit codes: ConfigError -> 1 (bad input),
// SolverError -> 2 (a solve failed or was refused), AuditError -> 3 (a
// physics audit tripped under --strict-audit).

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct StateError : std::runtime_error {
    explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct AuditError : std::runtime_error {
    explicit AuditError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace elk
