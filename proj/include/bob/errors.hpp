#pragma once

#include <stdexcept>
#include <string>

namespace bob {

// Invalid parameters or an unresolvable configuration (bad grid, regime off-grid).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside an operation's mathematical domain (support violation,
// backward dissipative flow, degenerate data).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or unbounded growth during time stepping or iteration.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Oscillatory quadrature that cannot resolve its integrand.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bob
