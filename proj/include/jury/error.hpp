#pragma once

#include <stdexcept>
#include <string>

namespace jury {

/// Caller broke a structural precondition (length mismatch, empty panel).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A probability or parameter lies outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request is well-formed but exceeds what exact enumeration supports.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jury
