#pragma once

#include <stdexcept>
#include <string>

namespace fsgl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A tabulated rule was queried inside its support but outside its node hull.
class HullError : public Error {
 public:
  using Error::Error;
};

/// A brute-force sweep would exceed the configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Tabulated samples fail a convexity requirement.
class ConvexityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration / input documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsgl
