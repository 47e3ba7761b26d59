#pragma once

#include <stdexcept>
#include <string>

namespace polya {

/// Malformed arguments: shape mismatches, empty inputs, bad configuration.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric argument outside the domain of a function (e.g. x <= 0 in a
/// recurrence sum, non-positive concentration).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Unreadable or malformed files: samples, corpora, model files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polya
