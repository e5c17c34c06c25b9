#pragma once

#include <stdexcept>
#include <string>

namespace qwasser {

/// A precondition on matrix shape or structure was not met (non-Hermitian input, non-unitary operator, ...).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An input is outside the mathematical domain of an operation (Bloch vector outside the ball, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The optimizer did not reach the accuracy a derived quantity needs.
class SolverAccuracyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwasser
