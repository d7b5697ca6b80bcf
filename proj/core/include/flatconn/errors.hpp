#pragma once

#include <stdexcept>
#include <string>

namespace flatconn {

// Input lies outside the closure of the domain, or the domain itself is invalid.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file or JSON value does not match the published schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An S1-valued map was evaluated at one of its singular centers.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver refused an instance that exceeds its size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampling resolution too coarse for a reliable integer extraction.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flatconn
