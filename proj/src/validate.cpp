#include "tagsched/validate.hpp"

#include <algorithm>
#include <map>

namespace tagsched {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptySlot:
      return "empty_slot";
    case ViolationKind::kRoleMismatch:
      return "role_mismatch";
    case ViolationKind::kUnrecordedQuery:
      return "unrecorded_query";
    case ViolationKind::kCarrierCount:
      return "carrier_count";
    case ViolationKind::kHostMultiQuery:
      return "host_multi_query";
    case ViolationKind::kCarrierNotNeighbor:
      return "carrier_not_neighbor";
    case ViolationKind::kTagNotHosted:
      return "tag_not_hosted";
  }
  return "?";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_schedule(const ProblemInstance& instance, const Schedule& schedule) {
  const auto& topo = instance.topology();
  const std::size_t n = topo.node_count();
  ValidationReport report;
  std::map<TagId, std::size_t> times_interrogated;
  for (const auto& tag : instance.tags()) times_interrogated[tag.id] = 0;

  std::vector<std::size_t> queries_by_host(n);
  for (std::size_t s = 0; s < schedule.slots.size(); ++s) {
    const auto& slot = schedule.slots[s];
    if (slot.roles.size() != n) {
      throw InvalidInput("slot " + std::to_string(s) + " has " + std::to_string(slot.roles.size()) +
                         " roles, instance has " + std::to_string(n) + " nodes");
    }
    for (const auto& rec : slot.interrogations) {
      if (rec.host >= n || rec.carrier >= n) {
        throw InvalidInput("slot " + std::to_string(s) + " references a node outside [0, " + std::to_string(n) + ")");
      }
    }
    auto flag = [&](ViolationKind kind, std::vector<std::uint32_t> ids) {
      report.violations.push_back(Violation{s, kind, std::move(ids)});
    };

    if (slot.interrogations.empty()) flag(ViolationKind::kEmptySlot, {});

    std::fill(queries_by_host.begin(), queries_by_host.end(), 0);
    for (const auto& rec : slot.interrogations) {
      ++queries_by_host[rec.host];
      if (slot.roles[rec.host] != Role::kTagQuery || slot.roles[rec.carrier] != Role::kCarrier) {
        flag(ViolationKind::kRoleMismatch, {rec.host, rec.carrier});
      }
      if (instance.has_tag(rec.tag) && instance.host_of(rec.tag) == rec.host) {
        ++times_interrogated[rec.tag];
      } else {
        flag(ViolationKind::kTagNotHosted, {rec.host, rec.tag});
      }
      if (!topo.adjacent(rec.host, rec.carrier)) flag(ViolationKind::kCarrierNotNeighbor, {rec.host, rec.carrier});
    }

    for (NodeId v = 0; v < n; ++v) {
      if (queries_by_host[v] > 1) flag(ViolationKind::kHostMultiQuery, {v});
      if (slot.roles[v] == Role::kTagQuery && queries_by_host[v] == 0) flag(ViolationKind::kUnrecordedQuery, {v});
      if (queries_by_host[v] == 0) continue;
      std::vector<std::uint32_t> impinging{v};
      for (NodeId u : topo.neighbors(v)) {
        if (slot.roles[u] == Role::kCarrier) impinging.push_back(u);
      }
      // 0 carriers leaves the tag unpowered, 2+ interfere
      if (impinging.size() != 2) flag(ViolationKind::kCarrierCount, std::move(impinging));
    }
  }

  for (const auto& [tag, count] : times_interrogated) {
    if (count == 0) report.never_interrogated.push_back(tag);
    if (count > 1) report.multiply_interrogated.push_back(tag);
  }
  report.valid =
      report.violations.empty() && report.never_interrogated.empty() && report.multiply_interrogated.empty();
  return report;
}

ScheduleCost schedule_cost(const ProblemInstance& instance, const Schedule& schedule) {
  ScheduleCost cost;
  cost.carriers = schedule.carrier_slots();
  cost.length = schedule.length();
  cost.objective = instance.tag_count() * cost.carriers + cost.length;
  return cost;
}

}  // namespace tagsched
