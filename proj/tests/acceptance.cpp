// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "mutations.hpp"
#include "oracle.hpp"
#include "tagsched/exact_solver.hpp"
#include "tagsched/gnn_scheduler.hpp"
#include "tagsched/heuristic.hpp"
#include "tagsched/instance_gen.hpp"
#include "tagsched/io.hpp"
#include "tagsched/metrics.hpp"
#include "tagsched/service.hpp"
#include "tagsched/validate.hpp"

#include <httplib.h>

using namespace tagsched;
using namespace tagsched::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

// Every schedule any criterion produces passes through here.
struct LengthBoundLedger {
  std::size_t checked = 0;
  std::size_t violations = 0;
  void record(const ProblemInstance& inst, const Schedule& s) {
    const auto cost = schedule_cost(inst, s);
    ++checked;
    if (cost.carriers < cost.length) ++violations;
  }
} length_bound;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::vector<TagId> slot_vector_of(const ProblemInstance& inst, const Schedule& s, std::vector<NodeId>& carriers) {
  std::vector<TagId> slots(inst.tag_count());
  carriers.assign(inst.tag_count(), 0);
  for (std::size_t j = 0; j < s.slots.size(); ++j) {
    for (const auto& rec : s.slots[j].interrogations) {
      slots[rec.tag - 1] = static_cast<TagId>(j);
      carriers[rec.tag - 1] = rec.carrier;
    }
  }
  return slots;
}

void oracle_equivalence() {
  const auto start = Clock::now();
  auto corpus = oracle_corpus(4, 3);
  const std::size_t exhaustive = corpus.size();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> tags(1, 4);
  for (int i = 0; i < 200; ++i) corpus.push_back(random_small_instance(rng, 5, tags(rng)));

  std::size_t mismatches = 0;
  std::size_t infeasible = 0;
  for (const auto& inst : corpus) {
    const auto expected = brute_force_optimum(inst);
    if (!expected) {
      ++infeasible;
      try {
        solve_optimal(inst);
        ++mismatches;
      } catch (const InfeasibleError&) {
      }
      continue;
    }
    const auto s = solve_optimal(inst);
    length_bound.record(inst, s);
    const auto cost = schedule_cost(inst, s);
    std::vector<NodeId> carriers;
    const auto slots = slot_vector_of(inst, s, carriers);
    const bool same_slots = std::equal(slots.begin(), slots.end(), expected->slot_of_tag.begin());
    if (!validate_schedule(inst, s).valid || cost.carriers != expected->carriers || cost.length != expected->length ||
        cost.objective != expected->objective || !same_slots || carriers != expected->carrier_of_tag) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << corpus.size() << " instances (" << exhaustive << " exhaustive with N<=4,T<=3, 200 random N=5,T<=4; "
         << infeasible << " infeasible on both sides), " << mismatches << " mismatches in (C, L, objective, tie-break), "
         << elapsed << " s";
  report("exact solver matches brute force", mismatches == 0 && elapsed < 600.0, detail.str());
}

void validator_mutations() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> nodes(2, 7);
  std::uniform_int_distribution<std::size_t> tags(1, 8);
  std::size_t mutants = 0;
  std::size_t missed = 0;
  std::size_t originals = 0;
  std::size_t false_rejects = 0;
  std::vector<std::size_t> per_kind(kMutationKinds, 0);
  while (mutants < 10000) {
    const auto inst = random_small_instance(rng, nodes(rng), tags(rng));
    for (const Schedule& original : {solve_optimal(inst), solve_heuristic(inst)}) {
      ++originals;
      if (!validate_schedule(inst, original).valid) ++false_rejects;
      for (int k = 0; k < kMutationKinds && mutants < 10000; ++k) {
        const auto mutant = mutate(inst, original, static_cast<Mutation>(k), rng);
        if (!mutant) continue;
        ++mutants;
        ++per_kind[k];
        if (!mutant->expected.met_by(validate_schedule(inst, mutant->schedule))) ++missed;
      }
    }
  }
  std::ostringstream detail;
  detail << mutants << " mutants, " << missed << " not flagged with the expected kind; " << originals
         << " unmutated originals, " << false_rejects << " rejected; per-kind counts";
  for (auto c : per_kind) detail << ' ' << c;
  const bool all_kinds = std::all_of(per_kind.begin(), per_kind.end(), [](std::size_t c) { return c > 0; });
  report("validator catches single faults", missed == 0 && false_rejects == 0 && all_kinds, detail.str());
}

void heuristic_dominance() {
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (const auto& inst : oracle_corpus(4, 3)) {
    if (inst.node_count() == 1) continue;
    const auto h = solve_heuristic(inst);
    const auto opt = solve_optimal(inst);
    length_bound.record(inst, h);
    ++checked;
    if (!validate_schedule(inst, h).valid || schedule_cost(inst, h).objective < schedule_cost(inst, opt).objective) {
      ++bad;
    }
  }

  GeneratorConfig config;
  config.node_range = {1000, 1000};
  config.tag_range = {1500, 1500};
  config.model_parameter = 0.06;
  config.seed = 1000;
  const auto large = generate_instance(config);
  const auto start = Clock::now();
  const auto schedule = solve_heuristic(large);
  const double elapsed = seconds_since(start);
  const bool large_valid = validate_schedule(large, schedule).valid;
  length_bound.record(large, schedule);
  const auto cost = schedule_cost(large, schedule);

  std::ostringstream detail;
  detail << checked << " feasible small instances, " << bad << " invalid or better than optimal; N=1000 T=1500 "
         << "geometric instance (" << large.topology().edges().size() << " edges): "
         << (large_valid ? "valid" : "INVALID") << ", C=" << cost.carriers << " L=" << cost.length << ", " << elapsed
         << " s";
  report("heuristic is feasible and dominated by the optimum", bad == 0 && large_valid && elapsed < 60.0,
         detail.str());
}

gnn::GnnModel random_weights(std::uint64_t seed) { return gnn::random_model(gnn::GnnConfig{}, seed, true); }

void gnn_equivariance() {
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<std::size_t> nodes(2, 10);
  std::uniform_int_distribution<std::size_t> tags(1, 14);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = random_weights(9000 + trial);
    const std::size_t n = nodes(rng);
    const auto inst = random_small_instance(rng, n, tags(rng));
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<TagId> remaining;
    for (const auto& tag : inst.tags()) remaining.push_back(tag.id);
    const auto x = build_feature_matrix(inst, remaining, PeMode::kDegree);
    const auto topo = inst.topology().permuted(perm);
    auto px = x;
    for (NodeId v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < x.cols; ++c) px.values[perm[v] * x.cols + c] = x.at(v, c);
    }
    const auto pe = node_degrees(topo);
    for (NodeId v = 0; v < n; ++v) px.values[v * x.cols + kPeColumn] = pe[v];

    const auto a = model.forward(x, inst.topology());
    const auto b = model.forward(px, topo);
    for (NodeId v = 0; v < n; ++v) {
      for (Eigen::Index c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a(v, c) - b(perm[v], c)));
    }
  }
  std::ostringstream detail;
  detail << "100 (instance, permutation, weights) triples at 12 blocks x 12 heads, max |deviation| = " << worst;
  report("GNN is permutation equivariant", worst <= 1e-5, detail.str());
}

void gnn_termination() {
  GeneratorConfig config;
  config.seed = 606;
  const auto corpus = generate_corpus(config, 500);

  std::array<bool, 500> repair_outcomes{};
  std::array<bool, 500> fallback_outcomes{};
  std::size_t overruns = 0;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& inst = corpus[i];
    const auto model = random_weights(i);
    const std::size_t limit = inst.tag_count() + 2;
    try {
      const auto s = gnn::schedule_with_gnn(model, inst, {gnn::RepairPolicy::kGreedyRepair, {}});
      if (s.length() > limit) ++overruns;
      if (!validate_schedule(inst, s).valid) ++invalid;
      length_bound.record(inst, s);
      repair_outcomes[i] = true;
    } catch (const gnn::ScheduleFailure& e) {
      if (e.partial().size() > limit) ++overruns;
    }
    try {
      const auto s = gnn::schedule_with_gnn(model, inst, {gnn::RepairPolicy::kHeuristicFallback, {}});
      const bool ok = validate_schedule(inst, s).valid;
      if (ok) length_bound.record(inst, s);
      fallback_outcomes[i] = ok && s.length() <= inst.tag_count();
    } catch (const gnn::ScheduleFailure&) {
    }
  }
  const double pi_repair = completion_rate(repair_outcomes);
  const double pi_fallback = completion_rate(fallback_outcomes);

  std::ostringstream detail;
  detail << "500 instances, random weights: GREEDY_REPAIR Pi = " << pi_repair << "% with " << overruns
         << " runs past T+2 slots and " << invalid << " invalid completions; HEURISTIC_FALLBACK Pi = " << pi_fallback
         << "%";
  report("GNN inference terminates and reports completion", overruns == 0 && invalid == 0 && pi_fallback == 100.0,
         detail.str());
}

void length_bound_check() {
  // Corpora beyond the ones above: generated training-scale instances through every scheduler.
  GeneratorConfig config;
  config.seed = 4242;
  const auto model = random_weights(1);
  for (const auto& inst : generate_corpus(config, 200)) {
    length_bound.record(inst, solve_optimal(inst));
    length_bound.record(inst, solve_heuristic(inst));
    length_bound.record(inst, gnn::schedule_with_gnn(model, inst, {gnn::RepairPolicy::kHeuristicFallback, {}}));
  }
  std::ostringstream detail;
  detail << length_bound.checked << " schedules from optimal, heuristic and GNN schedulers, " << length_bound.violations
         << " with C < L";
  report("every schedule has C >= L", length_bound.violations == 0 && length_bound.checked > 0, detail.str());
}

void energy_model() {
  const double e = avg_energy_per_tag(10, 10);
  // Hand evaluation: 0.102*128e-6 + 0.072*(128e-6 + 256e-6) + 0.102*(128e-6 + 15.75e-3).
  const double hand = 1.66026e-3;
  const bool value_ok = std::abs(e - hand) <= 1e-9;

  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::size_t> tag_dist(1, 5000);
  std::size_t disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t t = tag_dist(rng);
    std::uniform_int_distribution<std::size_t> c(0, 4 * t);
    const std::size_t ref = c(rng);
    const std::size_t cand = i % 20 == 0 ? ref : c(rng);
    const auto dc = carriers_saved(ref, cand);
    const double de = energy_saved_pct(ref, cand, t);
    const int sign_c = (dc > 0) - (dc < 0);
    const int sign_e = (de > 0) - (de < 0);
    if (sign_c != sign_e) ++disagreements;
  }
  std::ostringstream detail;
  detail.precision(12);
  detail << "E(C=T) = " << e << " J (|error| = " << std::abs(e - hand) << "); " << disagreements
         << " sign disagreements in 1000 triples";
  report("energy model", value_ok && disagreements == 0, detail.str());
}

void serialization_and_service() {
  std::size_t instances = 0;
  std::size_t schedules = 0;
  std::size_t broken = 0;
  for (const auto& inst : oracle_corpus(4, 3)) {
    ++instances;
    if (!(io::parse_instance(io::emit_instance(inst)) == inst)) ++broken;
    if (inst.node_count() == 1) continue;
    for (const auto& s : {solve_optimal(inst), solve_heuristic(inst)}) {
      ++schedules;
      if (!(io::parse_schedule(io::emit_schedule(s), inst) == s)) ++broken;
    }
  }

  service::ServiceContext ctx;
  service::Server server(ctx);
  const int port = server.bind("127.0.0.1", 0);
  std::thread worker([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  auto status = [&](const std::string& scheduler, const std::string& body) {
    const auto r = client.Post("/schedule?scheduler=" + scheduler, body, "application/json");
    return r ? r->status : -1;
  };
  const int ok = status("heuristic", R"({"nodes":2,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})");
  const int disconnected = status("heuristic", R"({"nodes":3,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})");
  const int infeasible = status("optimal", R"({"nodes":1,"edges":[],"tags":[{"id":1,"host":0}]})");
  server.stop();
  worker.join();

  std::ostringstream detail;
  detail << instances << " instances and " << schedules << " schedules round-tripped, " << broken
         << " differ; service statuses path=" << ok << " disconnected=" << disconnected
         << " isolated-host=" << infeasible;
  report("serialization round trip and service contract",
         broken == 0 && ok == 200 && disconnected == 400 && infeasible == 422, detail.str());
}

void run(const std::function<void()>& criterion, const std::string& name) {
  try {
    criterion();
  } catch (const std::exception& e) {
    report(name, false, std::string("unexpected exception: ") + e.what());
  }
}

}  // namespace

int main() {
  run(oracle_equivalence, "exact solver matches brute force");
  run(validator_mutations, "validator catches single faults");
  run(heuristic_dominance, "heuristic is feasible and dominated by the optimum");
  run(gnn_equivariance, "GNN is permutation equivariant");
  run(gnn_termination, "GNN inference terminates and reports completion");
  run(energy_model, "energy model");
  run(serialization_and_service, "serialization round trip and service contract");
  // Last, so it covers the schedules produced by every criterion above.
  run(length_bound_check, "every schedule has C >= L");
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
