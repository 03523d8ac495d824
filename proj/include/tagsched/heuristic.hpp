#pragma once

#include <span>

#include "tagsched/core.hpp"

namespace tagsched {

/// One greedy timeslot over the pending tags. Repeatedly activates the carrier
/// that newly serves the most hosts with pending tags, where a host is served
/// only if it is adjacent to the carrier, not yet querying, not a carrier, has no
/// other active carrier neighbor, and the new carrier does not impinge on any
/// host already querying. Ties go to the lowest node ID; each served host
/// queries its lowest pending tag ID. The slot is empty only if `pending` is.
Timeslot greedy_slot(const ProblemInstance& instance, std::span<const TagId> pending);

/// Greedy slots until no tag is pending. Throws InfeasibleError for a tag whose
/// host has no neighbor.
Schedule solve_heuristic(const ProblemInstance& instance);

}  // namespace tagsched
