#include "tagsched/heuristic.hpp"

#include <algorithm>
#include <vector>

namespace tagsched {

Timeslot greedy_slot(const ProblemInstance& instance, std::span<const TagId> pending) {
  const auto& topo = instance.topology();
  const std::size_t n = topo.node_count();

  std::vector<TagId> lowest_pending(n, 0);
  for (TagId tag : pending) {
    const NodeId host = instance.host_of(tag);
    if (lowest_pending[host] == 0 || tag < lowest_pending[host]) lowest_pending[host] = tag;
  }

  std::vector<Role> roles(n, Role::kIdle);
  std::vector<std::uint32_t> active_carrier_neighbors(n, 0);
  std::vector<Interrogation> records;

  auto servable = [&](NodeId h) {
    return roles[h] == Role::kIdle && lowest_pending[h] != 0 && active_carrier_neighbors[h] == 0;
  };

  while (true) {
    NodeId best = 0;
    std::size_t best_coverage = 0;
    for (NodeId c = 0; c < n; ++c) {
      if (roles[c] != Role::kIdle) continue;
      const auto neighbors = topo.neighbors(c);
      if (std::any_of(neighbors.begin(), neighbors.end(), [&](NodeId u) { return roles[u] == Role::kTagQuery; })) {
        continue;
      }
      const auto coverage = static_cast<std::size_t>(std::count_if(neighbors.begin(), neighbors.end(), servable));
      if (coverage > best_coverage) {
        best_coverage = coverage;
        best = c;
      }
    }
    if (best_coverage == 0) break;

    roles[best] = Role::kCarrier;
    std::vector<NodeId> served;
    for (NodeId h : topo.neighbors(best)) {
      if (servable(h)) served.push_back(h);
    }
    for (NodeId u : topo.neighbors(best)) ++active_carrier_neighbors[u];
    for (NodeId h : served) {
      roles[h] = Role::kTagQuery;
      records.push_back(Interrogation{h, lowest_pending[h], best});
    }
  }

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.tag < b.tag; });
  Timeslot slot;
  slot.roles = std::move(roles);
  slot.interrogations = std::move(records);
  return slot;
}

Schedule solve_heuristic(const ProblemInstance& instance) {
  for (const auto& tag : instance.tags()) {
    if (instance.topology().degree(tag.host) == 0) throw InfeasibleError(tag.id, tag.host);
  }
  std::vector<TagId> pending;
  for (const auto& tag : instance.tags()) pending.push_back(tag.id);

  Schedule schedule;
  while (!pending.empty()) {
    auto slot = greedy_slot(instance, pending);
    std::vector<TagId> done;
    for (const auto& rec : slot.interrogations) done.push_back(rec.tag);
    std::sort(done.begin(), done.end());
    std::erase_if(pending, [&](TagId t) { return std::binary_search(done.begin(), done.end(), t); });
    schedule.slots.push_back(std::move(slot));
  }
  return schedule;
}

}  // namespace tagsched
