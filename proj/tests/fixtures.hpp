#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tagsched/core.hpp"

namespace tagsched::testing {

inline ProblemInstance make_instance(std::size_t n, std::vector<Edge> edges, std::vector<Tag> tags) {
  return ProblemInstance(Topology(n, std::move(edges)), std::move(tags));
}

inline Topology path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Topology(n, std::move(edges));
}

inline Topology complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Topology(n, std::move(edges));
}

// Center 0, leaves 1..leaves.
inline Topology star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Topology(leaves + 1, std::move(edges));
}

/// Every connected labeled graph on n nodes.
inline std::vector<Topology> all_connected_topologies(std::size_t n) {
  std::vector<Edge> pairs;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::vector<Topology> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if ((mask >> i) & 1U) edges.push_back(pairs[i]);
    }
    if (is_connected(n, edges)) out.emplace_back(n, std::move(edges));
  }
  return out;
}

/// Every host assignment of tags 1..t on n nodes.
inline std::vector<std::vector<Tag>> all_tag_placements(std::size_t n, std::size_t t) {
  std::vector<std::vector<Tag>> out;
  std::vector<NodeId> hosts(t, 0);
  while (true) {
    std::vector<Tag> tags;
    for (std::size_t i = 0; i < t; ++i) tags.push_back(Tag{static_cast<TagId>(i + 1), hosts[i]});
    out.push_back(std::move(tags));
    std::size_t i = 0;
    while (i < t && ++hosts[i] == n) hosts[i++] = 0;
    if (i == t) break;
  }
  return out;
}

/// Connected topologies N <= max_nodes with every placement of 1..max_tags tags.
inline std::vector<ProblemInstance> oracle_corpus(std::size_t max_nodes = 4, std::size_t max_tags = 3) {
  std::vector<ProblemInstance> corpus;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    for (const auto& topo : all_connected_topologies(n)) {
      for (std::size_t t = 1; t <= max_tags; ++t) {
        for (auto& tags : all_tag_placements(n, t)) corpus.emplace_back(topo, std::move(tags));
      }
    }
  }
  return corpus;
}

/// Uniform random connected graph (rejection-sampled edge subsets) with uniform tag hosts.
inline ProblemInstance random_small_instance(std::mt19937_64& rng, std::size_t n, std::size_t t) {
  std::vector<Edge> pairs;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::bernoulli_distribution coin(0.5);
  std::vector<Edge> edges;
  do {
    edges.clear();
    for (const auto& e : pairs) {
      if (coin(rng)) edges.push_back(e);
    }
  } while (!is_connected(n, edges));
  std::uniform_int_distribution<NodeId> host(0, static_cast<NodeId>(n - 1));
  std::vector<Tag> tags;
  for (std::size_t i = 0; i < t; ++i) tags.push_back(Tag{static_cast<TagId>(i + 1), host(rng)});
  return ProblemInstance(Topology(n, std::move(edges)), std::move(tags));
}

}  // namespace tagsched::testing
