#pragma once

#include <stdexcept>
#include <string>

namespace bayimp {

/// Malformed scenario or message-profile input. `line`/`column` are 1-based
/// and set only for JSON syntax errors (0 otherwise).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string message, int line = 0, int column = 0)
      : std::runtime_error(std::move(message)), line(line), column(column) {}
  int line;
  int column;
};

/// An operation's stated precondition does not hold (e.g. undermining checks
/// require an outcome-changing deception).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A combinatorial search exceeded its candidate budget. `dimension` names
/// the limiting quantity so callers can report it.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string dimension, long long limit)
      : std::runtime_error("budget exceeded: " + dimension +
                           " (limit " + std::to_string(limit) + ")"),
        dimension(std::move(dimension)),
        limit(limit) {}
  std::string dimension;
  long long limit;
};

/// The swap-reply signal construction has an empty feasible accuracy set.
class ConstructionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bayimp
