#pragma once

#include <stdexcept>
#include <string>

namespace schedsim {

/// Instance or job data violates a model invariant (e.g. r + x > d).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (bad JSON, missing field, unknown field).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Generator spec is unsatisfiable (empty range, horizon too small, ...).
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// The slot oracle was asked for more unit slots than its configured limit.
class ScaleError : public std::runtime_error {
 public:
  explicit ScaleError(const std::string& what) : std::runtime_error(what) {}
};

/// A policy returned an illegal run set (too many machines, unreleased or
/// exhausted job, duplicate machine/job).
class PolicyViolation : public std::runtime_error {
 public:
  explicit PolicyViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Unusable experiment configuration (e.g. final composition with m < 3).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schedsim
