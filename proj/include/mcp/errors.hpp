#pragma once

#include <stdexcept>
#include <string>

namespace mcp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A program payload that does not follow its generator's layout.
/// `field()` names the first field that failed validation.
class MalformedPayload : public std::runtime_error {
 public:
  MalformedPayload(std::string field, const std::string& what)
      : std::runtime_error("malformed payload: field '" + field + "': " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class BudgetTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyCodebook : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No codebook entry satisfies the measurement constraint within tolerance.
class NoFeasibleCandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeOverflow : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DifferenceSetTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace mcp
