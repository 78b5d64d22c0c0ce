#pragma once

#include <stdexcept>
#include <string>

namespace rotolab {

// Signal types used across modules. All carry a human-readable message;
// callers that need the partial state catch the specific type.

struct OrbitOverflow : std::runtime_error {
    explicit OrbitOverflow(const std::string& msg) : std::runtime_error(msg) {}
};

struct BandEscape : std::runtime_error {
    explicit BandEscape(const std::string& msg) : std::runtime_error(msg) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct VerificationFailed : std::runtime_error {
    explicit VerificationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct InconsistentBracket : std::runtime_error {
    explicit InconsistentBracket(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rotolab
