#pragma once

#include <stdexcept>
#include <string>

namespace wpnn {

// Error hierarchy. Every failure mode surfaced by the library derives from
// std::runtime_error so callers can catch broadly or by specific cause.

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& msg) : std::runtime_error("dimension mismatch: " + msg) {}
};

struct SingularResolvent : std::runtime_error {
  explicit SingularResolvent(const std::string& msg) : std::runtime_error("singular resolvent: " + msg) {}
};

struct EigenFailure : std::runtime_error {
  explicit EigenFailure(const std::string& msg) : std::runtime_error("eigensolver failure: " + msg) {}
};

struct PassivityViolation : std::runtime_error {
  explicit PassivityViolation(const std::string& msg) : std::runtime_error("passivity violation: " + msg) {}
};

struct GridError : std::runtime_error {
  explicit GridError(const std::string& msg) : std::runtime_error("grid error: " + msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error("domain error: " + msg) {}
};

struct ModeError : std::runtime_error {
  explicit ModeError(const std::string& msg) : std::runtime_error("mode error: " + msg) {}
};

struct DegenerateTarget : std::runtime_error {
  explicit DegenerateTarget(const std::string& msg) : std::runtime_error("degenerate target: " + msg) {}
};

struct FilterDesignError : std::runtime_error {
  explicit FilterDesignError(const std::string& msg) : std::runtime_error("filter design error: " + msg) {}
};

struct NonFiniteGradient : std::runtime_error {
  explicit NonFiniteGradient(const std::string& msg) : std::runtime_error("non-finite gradient: " + msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

}  // namespace wpnn
