#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tagsched {

using NodeId = std::uint32_t;
using TagId = std::uint32_t;

// Thrown when an instance, topology or schedule violates a structural invariant
// (out-of-range IDs, disconnected graph, wrong role vector length, ...).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tag whose host has no neighbor that could provide a carrier.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(TagId tag, NodeId host);
  TagId tag() const { return tag_; }
  NodeId host() const { return host_; }

 private:
  TagId tag_;
  NodeId host_;
};

using Edge = std::pair<NodeId, NodeId>;

/// Undirected, connected, simple graph over nodes [0, N).
class Topology {
 public:
  Topology() = default;
  Topology(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  /// Edges with first < second, sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbors of `v`, sorted ascending.
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool adjacent(NodeId u, NodeId v) const;

  /// Relabels node v as perm[v].
  Topology permuted(std::span<const NodeId> perm) const;

  bool operator==(const Topology& other) const { return edges_ == other.edges_ && adjacency_.size() == other.adjacency_.size(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

bool is_connected(std::size_t node_count, std::span<const Edge> edges);

struct Tag {
  TagId id = 0;
  NodeId host = 0;
  bool operator==(const Tag&) const = default;
};

class ProblemInstance {
 public:
  ProblemInstance() = default;
  ProblemInstance(Topology topology, std::vector<Tag> tags);

  const Topology& topology() const { return topology_; }
  std::size_t node_count() const { return topology_.node_count(); }
  std::size_t tag_count() const { return tags_.size(); }
  /// Tags sorted by ID.
  const std::vector<Tag>& tags() const { return tags_; }
  /// Tags hosted by `v`, sorted by ID.
  std::span<const TagId> hosted(NodeId v) const { return hosted_[v]; }
  /// Host of `tag`, or throws InvalidInput for unknown IDs.
  NodeId host_of(TagId tag) const;
  bool has_tag(TagId tag) const;
  TagId max_tag_id() const { return tags_.empty() ? 0 : tags_.back().id; }

  bool operator==(const ProblemInstance& other) const {
    return topology_ == other.topology_ && tags_ == other.tags_;
  }

 private:
  Topology topology_;
  std::vector<Tag> tags_;
  std::vector<std::vector<TagId>> hosted_;
};

enum class Role : std::uint8_t { kTagQuery = 0, kCarrier = 1, kIdle = 2 };

const char* to_string(Role role);

struct Interrogation {
  NodeId host = 0;
  TagId tag = 0;
  NodeId carrier = 0;
  bool operator==(const Interrogation&) const = default;
};

struct Timeslot {
  std::vector<Role> roles;
  std::vector<Interrogation> interrogations;

  /// Slot whose roles are exactly the hosts and carriers named by `records`.
  static Timeslot from_interrogations(std::size_t node_count, std::vector<Interrogation> records);

  std::size_t carrier_count() const;
  bool operator==(const Timeslot&) const = default;
};

struct Schedule {
  std::vector<Timeslot> slots;

  std::size_t length() const { return slots.size(); }
  /// Total CARRIER role assignments over all slots.
  std::size_t carrier_slots() const;
  bool operator==(const Schedule&) const = default;
};

}  // namespace tagsched
