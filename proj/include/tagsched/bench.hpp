#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagsched/core.hpp"
#include "tagsched/metrics.hpp"

namespace tagsched {

// A scheduler emitted a schedule that failed validation, or the harness was misconfigured.
class BenchmarkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedScheduler {
  std::string name;
  std::function<Schedule(const ProblemInstance&)> run;
};

struct RunRecord {
  std::size_t instance_id = 0;
  std::size_t nodes = 0;
  std::size_t tags = 0;
  std::string scheduler;
  bool success = false;
  std::size_t carriers = 0;
  std::size_t length = 0;
  std::size_t objective = 0;
  double runtime_ms = 0.0;
  std::string failure;  // exception message when !success
};

// Paired savings of one scheduler against the reference on one (N, T) cell,
// over the instances both completed.
struct CellDeltas {
  std::size_t nodes = 0;
  std::size_t tags = 0;
  std::string scheduler;
  Summary carriers_saved;
  Summary carriers_saved_pct;
  Summary timeslots_saved;
  Summary energy_saved_pct;
};

struct SchedulerSummary {
  std::string name;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double completion_pct = 0.0;
  Summary runtime_ms;
};

struct BenchmarkReport {
  std::string reference;
  std::vector<RunRecord> runs;  // instance-major, scheduler order as given
  std::vector<SchedulerSummary> schedulers;
  std::vector<CellDeltas> deltas;  // sorted by (N, T, scheduler)
};

/// Runs every scheduler on every instance, validating each schedule. Failures
/// (infeasible, solver timeout, GNN schedule failure) count against completion;
/// an invalid schedule throws BenchmarkError. `threads` > 1 runs instances in parallel.
BenchmarkReport run_benchmark(const std::vector<ProblemInstance>& corpus, const std::vector<NamedScheduler>& schedulers,
                              const std::string& reference, const RadioParams& radio = {}, std::size_t threads = 1);

}  // namespace tagsched
