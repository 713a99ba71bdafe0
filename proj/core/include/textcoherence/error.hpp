#pragma once

#include <stdexcept>
#include <string>

namespace textcoherence {

// Malformed or inconsistent input data (files, records, resources).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments to a library operation (empty inputs, mixed dimensions,
// zero-norm vectors, bad histogram specs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Run configuration rejected before any work starts.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace textcoherence
