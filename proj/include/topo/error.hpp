#pragma once

#include <stdexcept>
#include <string>

namespace topo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Malformed input text.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

class NotFoundError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_found"; }
};

// Input sits on a geometric degeneracy the algorithms do not resolve.
class DegeneracyError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degeneracy"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "infeasible"; }
};

// Solver stopped on its limit without a usable incumbent.
class TimeoutError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "timeout"; }
};

}  // namespace topo
