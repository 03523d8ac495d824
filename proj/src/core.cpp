#include "tagsched/core.hpp"

#include <algorithm>
#include <numeric>

namespace tagsched {

InfeasibleError::InfeasibleError(TagId tag, NodeId host)
    : std::runtime_error("tag " + std::to_string(tag) + " is infeasible: host node " + std::to_string(host) +
                         " has no neighbor to provide a carrier"),
      tag_(tag),
      host_(host) {}

bool is_connected(std::size_t node_count, std::span<const Edge> edges) {
  if (node_count == 0) return false;
  // union-find
  std::vector<NodeId> parent(node_count);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t components = node_count;
  for (const auto& [u, v] : edges) {
    auto ru = find(u);
    auto rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components == 1;
}

Topology::Topology(std::size_t node_count, std::vector<Edge> edges) : adjacency_(node_count) {
  if (node_count == 0) throw InvalidInput("topology: node count must be at least 1");
  for (auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw InvalidInput("topology: edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    if (u == v) throw InvalidInput("topology: self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw InvalidInput("topology: duplicate edge (" + std::to_string(dup->first) + "," +
                       std::to_string(dup->second) + ")");
  }
  if (!is_connected(node_count, edges)) throw InvalidInput("topology: graph is not connected");
  for (const auto& [u, v] : edges) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  edges_ = std::move(edges);
}

bool Topology::adjacent(NodeId u, NodeId v) const {
  if (u >= adjacency_.size() || v >= adjacency_.size()) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

Topology Topology::permuted(std::span<const NodeId> perm) const {
  if (perm.size() != node_count()) throw InvalidInput("topology: permutation size mismatch");
  std::vector<Edge> relabeled;
  relabeled.reserve(edges_.size());
  for (const auto& [u, v] : edges_) relabeled.emplace_back(perm[u], perm[v]);
  return Topology(node_count(), std::move(relabeled));
}

ProblemInstance::ProblemInstance(Topology topology, std::vector<Tag> tags)
    : topology_(std::move(topology)), tags_(std::move(tags)), hosted_(topology_.node_count()) {
  std::sort(tags_.begin(), tags_.end(), [](const Tag& a, const Tag& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    const auto& tag = tags_[i];
    if (tag.id == 0) throw InvalidInput("tags: tag IDs must be positive");
    if (i > 0 && tags_[i - 1].id == tag.id) throw InvalidInput("tags: duplicate tag id " + std::to_string(tag.id));
    if (tag.host >= topology_.node_count()) {
      throw InvalidInput("tags: tag " + std::to_string(tag.id) + " has host " + std::to_string(tag.host) +
                         " outside the topology");
    }
    hosted_[tag.host].push_back(tag.id);
  }
}

NodeId ProblemInstance::host_of(TagId tag) const {
  auto it = std::lower_bound(tags_.begin(), tags_.end(), tag, [](const Tag& t, TagId id) { return t.id < id; });
  if (it == tags_.end() || it->id != tag) throw InvalidInput("unknown tag id " + std::to_string(tag));
  return it->host;
}

bool ProblemInstance::has_tag(TagId tag) const {
  return std::binary_search(tags_.begin(), tags_.end(), Tag{tag, 0},
                            [](const Tag& a, const Tag& b) { return a.id < b.id; });
}

const char* to_string(Role role) {
  switch (role) {
    case Role::kTagQuery:
      return "TAG_QUERY";
    case Role::kCarrier:
      return "CARRIER";
    case Role::kIdle:
      return "IDLE";
  }
  return "?";
}

Timeslot Timeslot::from_interrogations(std::size_t node_count, std::vector<Interrogation> records) {
  Timeslot slot;
  slot.roles.assign(node_count, Role::kIdle);
  for (const auto& rec : records) {
    if (rec.host >= node_count || rec.carrier >= node_count) {
      throw InvalidInput("interrogation references a node outside [0, " + std::to_string(node_count) + ")");
    }
    slot.roles[rec.carrier] = Role::kCarrier;
  }
  // hosts win over carriers so a conflicting record is visible to the validator
  for (const auto& rec : records) slot.roles[rec.host] = Role::kTagQuery;
  slot.interrogations = std::move(records);
  return slot;
}

std::size_t Timeslot::carrier_count() const {
  return static_cast<std::size_t>(std::count(roles.begin(), roles.end(), Role::kCarrier));
}

std::size_t Schedule::carrier_slots() const {
  std::size_t total = 0;
  for (const auto& slot : slots) total += slot.carrier_count();
  return total;
}

}  // namespace tagsched
