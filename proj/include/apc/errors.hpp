#pragma once

#include <stdexcept>
#include <string>

namespace apc {

// Invalid configuration input (bad file, bad key, out-of-range value).
// CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure while stepping (NaN, blow-up, undershoot beyond
// tolerance). CLI maps this to exit code 2.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace apc
