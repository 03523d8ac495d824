#include "tagsched/gnn_scheduler.hpp"

#include <algorithm>

#include "tagsched/heuristic.hpp"
#include "tagsched/instance_gen.hpp"

namespace tagsched::gnn {

const char* to_string(RepairPolicy policy) {
  switch (policy) {
    case RepairPolicy::kStrictFail:
      return "strict";
    case RepairPolicy::kGreedyRepair:
      return "repair";
    case RepairPolicy::kHeuristicFallback:
      return "fallback";
  }
  return "?";
}

std::optional<RepairPolicy> repair_policy_from_string(const std::string& text) {
  if (text == "strict") return RepairPolicy::kStrictFail;
  if (text == "repair") return RepairPolicy::kGreedyRepair;
  if (text == "fallback") return RepairPolicy::kHeuristicFallback;
  return std::nullopt;
}

CachedInstance::CachedInstance(const ProblemInstance& inst) : instance(&inst) {
  for (const auto& tag : inst.tags()) remaining_tags.push_back(tag.id);
}

std::vector<Role> classify(const Eigen::MatrixXd& logits) {
  std::vector<Role> roles(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(r, c) > logits(r, best)) best = c;
    }
    roles[static_cast<std::size_t>(r)] = best == static_cast<Eigen::Index>(kClassTagQuery) ? Role::kTagQuery
                                          : best == static_cast<Eigen::Index>(kClassCarrier) ? Role::kCarrier
                                                                                             : Role::kIdle;
  }
  return roles;
}

std::optional<Timeslot> resolve_slot(const ProblemInstance& instance, std::span<const TagId> remaining,
                                     std::vector<Role> roles, RepairPolicy policy) {
  const auto& topo = instance.topology();
  const std::size_t n = topo.node_count();
  if (roles.size() != n) throw InvalidInput("role vector length does not match node count");

  std::vector<TagId> lowest(n, 0);
  for (TagId tag : remaining) {
    const NodeId host = instance.host_of(tag);
    if (lowest[host] == 0 || tag < lowest[host]) lowest[host] = tag;
  }
  auto carrier_neighbors = [&](NodeId v) {
    return std::count_if(topo.neighbors(v).begin(), topo.neighbors(v).end(),
                         [&](NodeId u) { return roles[u] == Role::kCarrier; });
  };

  const bool strict = policy == RepairPolicy::kStrictFail;
  for (NodeId v = 0; v < n; ++v) {
    if (roles[v] != Role::kTagQuery) continue;
    if (lowest[v] == 0 || carrier_neighbors(v) != 1) {
      if (strict) return std::nullopt;
      roles[v] = Role::kIdle;
    }
  }
  if (!strict) {
    for (NodeId v = 0; v < n; ++v) {
      if (roles[v] != Role::kCarrier) continue;
      const auto neighbors = topo.neighbors(v);
      if (std::none_of(neighbors.begin(), neighbors.end(), [&](NodeId u) { return roles[u] == Role::kTagQuery; })) {
        roles[v] = Role::kIdle;
      }
    }
  }

  Timeslot slot;
  for (NodeId v = 0; v < n; ++v) {
    if (roles[v] != Role::kTagQuery) continue;
    for (NodeId u : topo.neighbors(v)) {
      if (roles[u] == Role::kCarrier) {
        slot.interrogations.push_back(Interrogation{v, lowest[v], u});
        break;
      }
    }
  }
  if (slot.interrogations.empty()) {
    if (policy != RepairPolicy::kHeuristicFallback) return std::nullopt;
    auto fallback = greedy_slot(instance, remaining);
    if (fallback.interrogations.empty()) return std::nullopt;
    return fallback;
  }
  std::sort(slot.interrogations.begin(), slot.interrogations.end(),
            [](const auto& a, const auto& b) { return a.tag < b.tag; });
  slot.roles = std::move(roles);
  return slot;
}

std::optional<Timeslot> next_timeslot(const GnnModel& model, CachedInstance& cached, RepairPolicy policy) {
  if (cached.remaining_tags.empty()) throw InvalidInput("next_timeslot: no remaining tags");
  const auto& instance = *cached.instance;
  const auto features = build_feature_matrix(instance, cached.remaining_tags, model.config().pe_mode);
  const auto logits = model.forward(features, instance.topology());
  auto slot = resolve_slot(instance, cached.remaining_tags, classify(logits), policy);
  if (!slot) return std::nullopt;
  std::erase_if(cached.remaining_tags, [&](TagId t) {
    return std::any_of(slot->interrogations.begin(), slot->interrogations.end(),
                       [&](const Interrogation& rec) { return rec.tag == t; });
  });
  cached.slots_emitted.push_back(*slot);
  return slot;
}

Schedule schedule_with_gnn(const GnnModel& model, const ProblemInstance& instance, const InferencePolicy& policy) {
  const std::size_t t = instance.tag_count();
  const std::size_t max_slots = policy.max_slots.value_or(t + 2);
  if (max_slots < t) throw InvalidInput("max_slots must be at least the tag count");

  CachedInstance cached(instance);
  while (!cached.remaining_tags.empty()) {
    if (cached.slots_emitted.size() >= max_slots) {
      throw ScheduleFailure("schedule exceeded " + std::to_string(max_slots) + " slots", cached.slots_emitted);
    }
    if (!next_timeslot(model, cached, policy.repair)) {
      throw ScheduleFailure("slot " + std::to_string(cached.slots_emitted.size() + 1) + " failed under policy " +
                                to_string(policy.repair),
                            cached.slots_emitted);
    }
  }
  return Schedule{std::move(cached.slots_emitted)};
}

}  // namespace tagsched::gnn
