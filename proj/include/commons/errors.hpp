#pragma once

#include <stdexcept>
#include <string>

namespace commons {

/// Payoff parameters violate Assumption 1 or 2 (or a greedy sign constraint).
struct invalid_policy_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A game instance is ill-posed (e.g. the policy is not responsible).
struct invalid_instance_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An argument left the domain the formulas are defined on.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// The restricted strategy set A_i(alpha_{-i}) is empty.
struct empty_strategy_set_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A state component became NaN/Inf during integration.
struct non_finite_state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace commons
