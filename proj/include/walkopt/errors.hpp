#pragma once

#include <stdexcept>
#include <string>

namespace walkopt {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input could not be read or tokenized at all (malformed JSON, bad token).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Input parsed but does not conform to the expected schema; the message
// names the offending field path.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

// Semantically invalid data (invariant violations, bad weights, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// An allocation violates budgets or capacities for its instance.
class FeasibilityError : public Error {
 public:
  explicit FeasibilityError(const std::string& msg) : Error(msg) {}
};

// A requested computation exceeds a configured size limit.
class SizeLimitError : public Error {
 public:
  explicit SizeLimitError(const std::string& msg) : Error(msg) {}
};

}  // namespace walkopt
