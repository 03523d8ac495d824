#include "tagsched/exact_solver.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <vector>

namespace tagsched {

namespace {

using Mask = std::uint32_t;
constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// For every host set H: fewest carriers K (disjoint from H) such that each host
// in H has exactly one neighbor in K. kUnreachable when no such K exists.
std::vector<std::uint32_t> min_carrier_table(const Topology& topo) {
  const std::size_t n = topo.node_count();
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<Mask> neighbor_mask(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : topo.neighbors(v)) neighbor_mask[v] |= Mask{1} << u;
  }
  std::vector<std::uint32_t> table(subsets, kUnreachable);
  for (Mask carriers = 1; carriers < subsets; ++carriers) {
    Mask served = 0;
    for (NodeId v = 0; v < n; ++v) {
      if ((carriers >> v) & 1U) continue;
      if (std::popcount(neighbor_mask[v] & carriers) == 1) served |= Mask{1} << v;
    }
    table[served] = std::min<std::uint32_t>(table[served], static_cast<std::uint32_t>(std::popcount(carriers)));
  }
  // superset minimum: H is servable by any K that serves a superset of H
  for (std::size_t bit = 0; bit < n; ++bit) {
    for (Mask h = 0; h < subsets; ++h) {
      if (!((h >> bit) & 1U)) table[h] = std::min(table[h], table[h | (Mask{1} << bit)]);
    }
  }
  table[0] = 0;
  return table;
}

class BranchAndBound {
 public:
  BranchAndBound(const ProblemInstance& instance, const SolverBudget& budget, bool pruning)
      : instance_(instance),
        budget_(budget),
        pruning_(pruning),
        min_carriers_(min_carrier_table(instance.topology())),
        started_(std::chrono::steady_clock::now()) {
    for (const auto& tag : instance.tags()) tag_hosts_.push_back(Mask{1} << tag.host);
  }

  Schedule solve() {
    const std::size_t t = tag_hosts_.size();
    std::size_t min_length = 1;
    for (NodeId v = 0; v < instance_.node_count(); ++v) min_length = std::max(min_length, instance_.hosted(v).size());

    for (std::size_t length = min_length; length <= t; ++length) {
      // every slot needs a carrier, so C >= L bounds the objective from below
      if (best_objective_ <= t * length + length) break;
      length_ = length;
      const std::size_t budget_carriers = best_objective_ == kNone ? kNone : (best_objective_ - length - 1) / t;
      carrier_bound_ = budget_carriers == kNone ? kNone : budget_carriers + 1;
      slot_hosts_.assign(length, 0);
      assignment_.assign(t, 0);
      found_ = false;
      descend(0, 0, 0);
      if (found_) {
        best_objective_ = t * carrier_bound_ + length;
        best_assignment_ = found_assignment_;
        best_length_ = length;
      }
    }
    return build_schedule(best_assignment_, best_length_);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void tick() {
    ++expansions_;
    if (expansions_ > budget_.node_expansion_limit ||
        ((expansions_ & 0xFFF) == 0 && std::chrono::steady_clock::now() - started_ > budget_.time_limit)) {
      throw SolverTimeout("exact solver budget exhausted after " + std::to_string(expansions_) + " expansions",
                          incumbent());
    }
  }

  std::optional<Schedule> incumbent() const {
    if (found_) return build_schedule(found_assignment_, length_);
    if (best_length_ > 0) return build_schedule(best_assignment_, best_length_);
    return std::nullopt;
  }

  // Tags [0, index) are placed in slots [0, opened); `carriers` sums their minimum carrier counts.
  void descend(std::size_t index, std::size_t opened, std::size_t carriers) {
    tick();
    const std::size_t t = tag_hosts_.size();
    if (index == t) {
      if (opened == length_ && carriers < carrier_bound_) {
        carrier_bound_ = carriers;
        found_assignment_ = assignment_;
        found_ = true;
      }
      return;
    }
    // slot labels are interchangeable, so tag `index` opens at most the next unused slot
    const std::size_t last = std::min(opened, length_ - 1);
    for (std::size_t slot = 0; slot <= last; ++slot) {
      const Mask host = tag_hosts_[index];
      if (slot_hosts_[slot] & host) continue;
      const std::size_t next_opened = slot == opened ? opened + 1 : opened;
      if (t - index - 1 < length_ - next_opened) continue;
      const Mask before = slot_hosts_[slot];
      const auto after_cost = min_carriers_[before | host];
      if (after_cost == kUnreachable) continue;
      const std::size_t next_carriers = carriers - min_carriers_[before] + after_cost;
      if (pruning_ && next_carriers + (length_ - next_opened) >= carrier_bound_) continue;
      slot_hosts_[slot] = before | host;
      assignment_[index] = static_cast<std::uint32_t>(slot);
      descend(index + 1, next_opened, next_carriers);
      slot_hosts_[slot] = before;
    }
  }

  // Lexicographically smallest carrier vector (tags in ID order) among minimum carrier sets.
  std::vector<Interrogation> carriers_for_slot(const std::vector<std::size_t>& tag_indices) const {
    const auto& topo = instance_.topology();
    const std::size_t n = topo.node_count();
    Mask hosts = 0;
    for (auto i : tag_indices) hosts |= tag_hosts_[i];
    const auto needed = min_carriers_[hosts];
    std::vector<NodeId> best;
    std::vector<NodeId> trial(tag_indices.size());
    for (Mask carriers = 1; carriers < (Mask{1} << n); ++carriers) {
      if (carriers & hosts || static_cast<std::uint32_t>(std::popcount(carriers)) != needed) continue;
      bool ok = true;
      for (std::size_t k = 0; k < tag_indices.size() && ok; ++k) {
        const NodeId host = instance_.tags()[tag_indices[k]].host;
        int count = 0;
        for (NodeId u : topo.neighbors(host)) {
          if ((carriers >> u) & 1U) {
            ++count;
            trial[k] = u;
          }
        }
        ok = count == 1;
      }
      if (ok && (best.empty() || trial < best)) best = trial;
    }
    std::vector<Interrogation> records;
    for (std::size_t k = 0; k < tag_indices.size(); ++k) {
      const auto& tag = instance_.tags()[tag_indices[k]];
      records.push_back(Interrogation{tag.host, tag.id, best[k]});
    }
    return records;
  }

  Schedule build_schedule(const std::vector<std::uint32_t>& assignment, std::size_t length) const {
    std::vector<std::vector<std::size_t>> by_slot(length);
    for (std::size_t i = 0; i < assignment.size(); ++i) by_slot[assignment[i]].push_back(i);
    Schedule schedule;
    for (const auto& tag_indices : by_slot) {
      schedule.slots.push_back(Timeslot::from_interrogations(instance_.node_count(), carriers_for_slot(tag_indices)));
    }
    return schedule;
  }

  const ProblemInstance& instance_;
  SolverBudget budget_;
  bool pruning_;
  std::vector<std::uint32_t> min_carriers_;
  std::vector<Mask> tag_hosts_;
  std::chrono::steady_clock::time_point started_;
  std::uint64_t expansions_ = 0;

  std::size_t length_ = 0;
  std::vector<Mask> slot_hosts_;
  std::vector<std::uint32_t> assignment_;
  std::size_t carrier_bound_ = kNone;
  bool found_ = false;
  std::vector<std::uint32_t> found_assignment_;

  std::size_t best_objective_ = kNone;
  std::size_t best_length_ = 0;
  std::vector<std::uint32_t> best_assignment_;
};

}  // namespace

Schedule solve_optimal(const ProblemInstance& instance, const SolverBudget& budget, bool pruning) {
  const std::size_t n = instance.node_count();
  const std::size_t cap = std::min(budget.max_nodes, kExactSolverNodeCap);
  if (n > cap) {
    throw SolverLimitError("exact solver refuses " + std::to_string(n) + "-node instance (cap " +
                           std::to_string(cap) + ")");
  }
  if (instance.tag_count() == 0) throw InvalidInput("exact solver: instance has no tags");
  for (const auto& tag : instance.tags()) {
    if (instance.topology().degree(tag.host) == 0) throw InfeasibleError(tag.id, tag.host);
  }
  return BranchAndBound(instance, budget, pruning).solve();
}

}  // namespace tagsched
