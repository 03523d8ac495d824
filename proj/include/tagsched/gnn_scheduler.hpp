#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagsched/core.hpp"
#include "tagsched/gnn.hpp"

namespace tagsched::gnn {

enum class RepairPolicy : std::uint8_t { kStrictFail, kGreedyRepair, kHeuristicFallback };

const char* to_string(RepairPolicy policy);
std::optional<RepairPolicy> repair_policy_from_string(const std::string& text);

struct InferencePolicy {
  RepairPolicy repair = RepairPolicy::kGreedyRepair;
  // Defaults to T + 2 when unset; must not be below T.
  std::optional<std::size_t> max_slots;
};

/// Topology plus the tags not yet interrogated and the slots emitted so far.
struct CachedInstance {
  const ProblemInstance* instance = nullptr;
  std::vector<TagId> remaining_tags;  // ascending
  std::vector<Timeslot> slots_emitted;

  explicit CachedInstance(const ProblemInstance& inst);
};

/// Per-node argmax; ties prefer TAG_QUERY, then CARRIER, then IDLE.
std::vector<Role> classify(const Eigen::MatrixXd& logits);

/// Turns predicted roles into a slot over `remaining` under `policy`. Each
/// TAG_QUERY node is matched to its lowest remaining tag ID and to its single
/// CARRIER neighbor. Returns nullopt when the policy yields no interrogation.
std::optional<Timeslot> resolve_slot(const ProblemInstance& instance, std::span<const TagId> remaining,
                                     std::vector<Role> roles, RepairPolicy policy);

/// One inference iteration. On success appends the slot to `cached` and drops
/// its tags from `remaining_tags`; on slot failure leaves `cached` unchanged.
std::optional<Timeslot> next_timeslot(const GnnModel& model, CachedInstance& cached, RepairPolicy policy);

class ScheduleFailure : public std::runtime_error {
 public:
  ScheduleFailure(std::string what, std::vector<Timeslot> partial)
      : std::runtime_error(std::move(what)), partial_(std::move(partial)) {}
  const std::vector<Timeslot>& partial() const { return partial_; }

 private:
  std::vector<Timeslot> partial_;
};

/// Repeats next_timeslot until every tag is interrogated. Throws ScheduleFailure
/// (with the slots produced so far) on a slot failure or when max_slots is hit.
Schedule schedule_with_gnn(const GnnModel& model, const ProblemInstance& instance, const InferencePolicy& policy);

}  // namespace tagsched::gnn
