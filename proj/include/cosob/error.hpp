#pragma once

#include <stdexcept>
#include <string>

namespace cosob {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters for a manifold, map family, embedding or scenario.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the set where the requested quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure cannot produce a trustworthy result (step underflow, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

}  // namespace cosob
