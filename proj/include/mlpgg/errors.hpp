#pragma once

#include <stdexcept>
#include <string>

namespace mlpgg {

// Invalid numeric parameter (sigma, mu, fractions, lattice sizes, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed textual input: strategy labels, edge lists, patch rows.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A game was asked to evaluate an impossible stake (contribution above endowment, group of one).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A run/sweep/boundary config that does not match the documented schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlpgg
