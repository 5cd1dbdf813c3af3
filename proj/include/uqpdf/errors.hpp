#pragma once

#include <stdexcept>
#include <string>

namespace uqpdf {

// Bad user-supplied parameters: out-of-range orders, guards, malformed config.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched sizes between objects that must share a discretization.
class DimensionError : public std::runtime_error {
public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdown, overflow, loss of exactness.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Coefficient (or assembled operator) fails the positivity required for a
// well-posed elliptic solve.
class CoercivityError : public NumericError {
public:
  explicit CoercivityError(const std::string& what) : NumericError(what) {}
};

// Zero-variance input: standardization and the expansions are undefined.
class DegenerateDistributionError : public std::runtime_error {
public:
  explicit DegenerateDistributionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Requested operation is outside what the method can represent.
class UnsupportedError : public std::runtime_error {
public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uqpdf
