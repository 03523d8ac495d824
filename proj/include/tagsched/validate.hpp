#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tagsched/core.hpp"

namespace tagsched {

enum class ViolationKind : std::uint8_t {
  kEmptySlot,           // slot carries no interrogation
  kRoleMismatch,        // record disagrees with the role vector
  kUnrecordedQuery,     // TAG_QUERY node without an interrogation record
  kCarrierCount,        // interrogated host sees != 1 CARRIER neighbor
  kHostMultiQuery,      // host queries more than one tag in a slot
  kCarrierNotNeighbor,  // recorded carrier is not adjacent to the host
  kTagNotHosted,        // record names a tag its node does not host
};

const char* to_string(ViolationKind kind);

struct Violation {
  std::size_t slot = 0;
  ViolationKind kind = ViolationKind::kEmptySlot;
  std::vector<std::uint32_t> ids;  // offending node and/or tag IDs, kind-specific
};

struct ValidationReport {
  bool valid = false;
  std::vector<Violation> violations;
  std::vector<TagId> never_interrogated;
  std::vector<TagId> multiply_interrogated;

  bool has(ViolationKind kind) const;
};

/// Checks every scheduling constraint. Throws InvalidInput when the schedule's
/// shape does not match the instance (wrong role-vector length, node IDs out of range).
ValidationReport validate_schedule(const ProblemInstance& instance, const Schedule& schedule);

struct ScheduleCost {
  std::size_t carriers = 0;  // C
  std::size_t length = 0;    // L
  std::size_t objective = 0; // T*C + L
  bool operator==(const ScheduleCost&) const = default;
};

ScheduleCost schedule_cost(const ProblemInstance& instance, const Schedule& schedule);

}  // namespace tagsched
