#pragma once

#include <stdexcept>

namespace lesplan {

/// Caller broke a documented precondition (bad ids, dimension mismatch, cycles).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A state was evaluated outside the search space.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The problem or planner configuration is unusable (e.g. start in collision).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Asked for a solution path while no vertex reached the goal region.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lesplan
