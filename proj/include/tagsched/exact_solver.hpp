#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "tagsched/core.hpp"

namespace tagsched {

struct SolverBudget {
  std::size_t max_nodes = 10;
  std::chrono::milliseconds time_limit{std::chrono::minutes(10)};
  std::uint64_t node_expansion_limit = 2'000'000'000;
};

// Instance exceeds SolverBudget::max_nodes; the solver refuses to start.
class SolverLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Budget ran out mid-search. Carries the best valid schedule found so far, if any.
class SolverTimeout : public std::runtime_error {
 public:
  SolverTimeout(std::string what, std::optional<Schedule> incumbent)
      : std::runtime_error(std::move(what)), incumbent_(std::move(incumbent)) {}
  const std::optional<Schedule>& incumbent() const { return incumbent_; }

 private:
  std::optional<Schedule> incumbent_;
};

// Largest topology the solver's subset tables support.
inline constexpr std::size_t kExactSolverNodeCap = 20;

/// Minimum T*C + L schedule. Among optimal schedules returns the one whose
/// per-tag slot-index vector (tags by ID) is lexicographically smallest, then
/// whose per-tag carrier vector is lexicographically smallest.
///
/// The search deepens over the schedule length L and assigns tags to slots
/// depth-first in tag-ID order. `pruning` toggles the bound
/// "carriers so far + one per unopened slot"; the result does not depend on it.
///
/// Throws InfeasibleError (lowest-ID tag whose host has no neighbor),
/// SolverLimitError (N above budget) or SolverTimeout.
Schedule solve_optimal(const ProblemInstance& instance, const SolverBudget& budget = {}, bool pruning = true);

}  // namespace tagsched
