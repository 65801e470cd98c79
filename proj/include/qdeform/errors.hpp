#pragma once

#include <stdexcept>
#include <string>

namespace qdeform {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Invalid parameters or preconditions (bad grid size, packet on the cut, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

// A role tag (hermitian / unitary) that the entries do not satisfy.
class RoleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "role"; }
};

// Numerical failure during time stepping (non-finite state, norm drift).
class IntegrationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "integration"; }
};

}  // namespace qdeform
