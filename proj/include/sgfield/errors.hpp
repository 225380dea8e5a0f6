#ifndef SGFIELD_ERRORS_HPP_
#define SGFIELD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sgfield {

/// Violated precondition or malformed input (wrong lengths, empty lists, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter outside the mathematical domain of an operation (s <= 0, t <= 0, alpha > 2, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Requested size exceeds the configured memory budget.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// Mesh too coarse for the requested geometric scale.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigensolver or other numerical routine failed.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgfield

#endif  // SGFIELD_ERRORS_HPP_
