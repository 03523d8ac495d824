#include "tagsched/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "tagsched/exact_solver.hpp"
#include "tagsched/gnn_scheduler.hpp"
#include "tagsched/validate.hpp"

namespace tagsched {

namespace {

RunRecord run_one(std::size_t id, const ProblemInstance& instance, const NamedScheduler& scheduler) {
  RunRecord rec;
  rec.instance_id = id;
  rec.nodes = instance.node_count();
  rec.tags = instance.tag_count();
  rec.scheduler = scheduler.name;
  Schedule schedule;
  const auto start = std::chrono::steady_clock::now();
  try {
    schedule = scheduler.run(instance);
    rec.success = true;
  } catch (const InfeasibleError& e) {
    rec.failure = e.what();
  } catch (const SolverTimeout& e) {
    rec.failure = e.what();
  } catch (const SolverLimitError& e) {
    rec.failure = e.what();
  } catch (const gnn::ScheduleFailure& e) {
    rec.failure = e.what();
  }
  rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (!rec.success) return rec;

  const auto report = validate_schedule(instance, schedule);
  if (!report.valid) {
    throw BenchmarkError("scheduler " + scheduler.name + " emitted an invalid schedule for instance " +
                         std::to_string(id));
  }
  const auto cost = schedule_cost(instance, schedule);
  rec.carriers = cost.carriers;
  rec.length = cost.length;
  rec.objective = cost.objective;
  return rec;
}

}  // namespace

BenchmarkReport run_benchmark(const std::vector<ProblemInstance>& corpus, const std::vector<NamedScheduler>& schedulers,
                              const std::string& reference, const RadioParams& radio, std::size_t threads) {
  if (corpus.empty()) throw BenchmarkError("benchmark corpus is empty");
  const auto ref_it = std::find_if(schedulers.begin(), schedulers.end(),
                                   [&](const NamedScheduler& s) { return s.name == reference; });
  if (ref_it == schedulers.end()) throw BenchmarkError("reference scheduler '" + reference + "' is not in the list");
  const auto ref_index = static_cast<std::size_t>(ref_it - schedulers.begin());
  radio.check();

  const std::size_t k = schedulers.size();
  BenchmarkReport report;
  report.reference = reference;
  report.runs.resize(corpus.size() * k);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        for (std::size_t s = 0; s < k; ++s) report.runs[i * k + s] = run_one(i, corpus[i], schedulers[s]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = corpus.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t s = 0; s < k; ++s) {
    SchedulerSummary summary;
    summary.name = schedulers[s].name;
    std::vector<bool> outcomes;
    std::vector<double> runtimes;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& rec = report.runs[i * k + s];
      outcomes.push_back(rec.success);
      runtimes.push_back(rec.runtime_ms);
    }
    summary.runs = outcomes.size();
    summary.successes = static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), true));
    summary.completion_pct = 100.0 * static_cast<double>(summary.successes) / static_cast<double>(summary.runs);
    summary.runtime_ms = summarize(std::move(runtimes));
    report.schedulers.push_back(std::move(summary));
  }

  struct Samples {
    std::vector<double> carriers, carriers_pct, timeslots, energy;
  };
  std::map<std::tuple<std::size_t, std::size_t, std::string>, Samples> cells;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& ref = report.runs[i * k + ref_index];
    for (std::size_t s = 0; s < k; ++s) {
      if (s == ref_index) continue;
      const auto& cand = report.runs[i * k + s];
      auto& cell = cells[{ref.nodes, ref.tags, cand.scheduler}];
      if (!ref.success || !cand.success) continue;
      cell.carriers.push_back(static_cast<double>(carriers_saved(ref.carriers, cand.carriers)));
      cell.carriers_pct.push_back(carriers_saved_pct(ref.carriers, cand.carriers));
      cell.timeslots.push_back(static_cast<double>(timeslots_saved(ref.length, cand.length)));
      cell.energy.push_back(energy_saved_pct(ref.carriers, cand.carriers, ref.tags, radio));
    }
  }
  for (auto& [key, samples] : cells) {
    CellDeltas d;
    std::tie(d.nodes, d.tags, d.scheduler) = key;
    d.carriers_saved = summarize(std::move(samples.carriers));
    d.carriers_saved_pct = summarize(std::move(samples.carriers_pct));
    d.timeslots_saved = summarize(std::move(samples.timeslots));
    d.energy_saved_pct = summarize(std::move(samples.energy));
    report.deltas.push_back(std::move(d));
  }
  return report;
}

}  // namespace tagsched
