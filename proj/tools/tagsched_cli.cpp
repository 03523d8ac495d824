// tagsched: instance generation, scheduling, validation, benchmarking and the schedule service.
//
// Exit codes: 0 success, 1 usage, 2 infeasible instance or scheduling failure, 3 internal error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "tagsched/bench.hpp"
#include "tagsched/exact_solver.hpp"
#include "tagsched/gnn.hpp"
#include "tagsched/gnn_scheduler.hpp"
#include "tagsched/heuristic.hpp"
#include "tagsched/instance_gen.hpp"
#include "tagsched/io.hpp"
#include "tagsched/service.hpp"
#include "tagsched/validate.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;
constexpr int kExitInternal = 3;
constexpr const char* kWeightsEnv = "TAGSCHED_WEIGHTS";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::shared_ptr<const tagsched::gnn::GnnModel> load_model(std::string path, bool required) {
  if (path.empty()) {
    if (const char* env = std::getenv(kWeightsEnv)) path = env;
  }
  if (path.empty()) {
    if (required) throw UsageError(std::string("GNN weights required: pass --weights or set ") + kWeightsEnv);
    return nullptr;
  }
  return std::make_shared<const tagsched::gnn::GnnModel>(tagsched::gnn::load_weights_file(path));
}

tagsched::gnn::RepairPolicy parse_policy(const std::string& text) {
  auto policy = tagsched::gnn::repair_policy_from_string(text);
  if (!policy) throw UsageError("unknown policy " + text);
  return *policy;
}

struct SchedulerOptions {
  std::string weights;
  std::string policy = "repair";
  std::size_t max_nodes = 10;
  long time_limit_ms = 600000;
};

tagsched::NamedScheduler make_scheduler(const std::string& name, const SchedulerOptions& opts,
                                        std::shared_ptr<const tagsched::gnn::GnnModel>& model) {
  using namespace tagsched;
  if (name == "heuristic") return {name, [](const ProblemInstance& i) { return solve_heuristic(i); }};
  if (name == "optimal") {
    SolverBudget budget;
    budget.max_nodes = opts.max_nodes;
    budget.time_limit = std::chrono::milliseconds(opts.time_limit_ms);
    return {name, [budget](const ProblemInstance& i) { return solve_optimal(i, budget); }};
  }
  if (name == "gnn") {
    if (!model) model = load_model(opts.weights, true);
    gnn::InferencePolicy policy{parse_policy(opts.policy), std::nullopt};
    auto shared = model;
    return {name, [shared, policy](const ProblemInstance& i) { return gnn::schedule_with_gnn(*shared, i, policy); }};
  }
  throw UsageError("unknown scheduler " + name + " (expected gnn, heuristic or optimal)");
}

void add_scheduler_options(CLI::App* cmd, SchedulerOptions& opts) {
  cmd->add_option("--weights", opts.weights, std::string("GNN weight file (default: $") + kWeightsEnv + ")");
  cmd->add_option("--policy", opts.policy, "GNN constraint policy: strict, repair, fallback")->capture_default_str();
  cmd->add_option("--max-nodes", opts.max_nodes, "exact solver node cap")->capture_default_str();
  cmd->add_option("--time-limit-ms", opts.time_limit_ms, "exact solver time limit")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tagsched;
  CLI::App app{"Carrier scheduling for backscatter tag networks"};
  app.require_subcommand(1);

  // gen
  GeneratorConfig gen_config;
  std::vector<std::size_t> node_range{2, 10};
  std::vector<std::size_t> tag_range{1, 14};
  std::string graph_model = "geometric";
  std::size_t count = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a corpus of random instances (one JSON per line)");
  gen->add_option("--node-range", node_range, "min max node count")->expected(2)->delimiter(',')->capture_default_str();
  gen->add_option("--tag-range", tag_range, "min max tag count")->expected(2)->delimiter(',')->capture_default_str();
  gen->add_option("--graph-model", graph_model, "geometric or erdos-renyi")->capture_default_str();
  gen->add_option("--model-parameter", gen_config.model_parameter, "radius or edge probability")
      ->capture_default_str();
  gen->add_option("--seed", gen_config.seed, "PRNG seed")->capture_default_str();
  gen->add_option("--max-attempts", gen_config.max_attempts, "connectivity retries")->capture_default_str();
  gen->add_option("--count", count, "number of instances")->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // solve
  std::string solve_instance = "-";
  std::string solve_scheduler = "heuristic";
  std::string solve_out;
  SchedulerOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "schedule one instance");
  solve->add_option("--instance", solve_instance, "instance JSON file, - for stdin")->capture_default_str();
  solve->add_option("--scheduler", solve_scheduler, "gnn, heuristic or optimal")->capture_default_str();
  solve->add_option("--out", solve_out, "output file (default stdout)");
  add_scheduler_options(solve, solve_opts);

  // validate
  std::string validate_instance;
  std::string validate_schedule_path;
  auto* validate = app.add_subcommand("validate", "check a schedule against an instance");
  validate->add_option("--instance", validate_instance, "instance JSON file")->required();
  validate->add_option("--schedule", validate_schedule_path, "schedule JSON file")->required();

  // bench
  std::string corpus_path;
  std::vector<std::string> bench_schedulers{"heuristic", "optimal"};
  std::string reference = "heuristic";
  std::string csv_path;
  std::string json_path;
  std::size_t threads = 1;
  SchedulerOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "run schedulers over a corpus and report metrics");
  bench->add_option("--corpus", corpus_path, "corpus file (one instance JSON per line)")->required();
  bench->add_option("--schedulers", bench_schedulers, "schedulers to run")->delimiter(',')->capture_default_str();
  bench->add_option("--reference", reference, "reference scheduler for the deltas")->capture_default_str();
  bench->add_option("--csv", csv_path, "per-run CSV output");
  bench->add_option("--json", json_path, "summary JSON output (default stdout)");
  bench->add_option("--threads", threads, "worker threads")->capture_default_str();
  add_scheduler_options(bench, bench_opts);

  // serve
  std::string host = "0.0.0.0";
  int port = 8080;
  SchedulerOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "HTTP schedule service: POST /schedule?scheduler=...");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  add_scheduler_options(serve, serve_opts);

  // init-weights
  gnn::GnnConfig init_config;
  std::string init_pe = "degree";
  std::uint64_t init_seed = 0;
  std::string init_out;
  auto* init = app.add_subcommand("init-weights", "write a randomly initialized weight file");
  init->add_option("--num-blocks", init_config.num_blocks)->capture_default_str();
  init->add_option("--num-heads", init_config.num_heads)->capture_default_str();
  init->add_option("--hidden-dim", init_config.hidden_dim)->capture_default_str();
  init->add_option("--pe-mode", init_pe, "none, degree or laplacian")->capture_default_str();
  init->add_option("--seed", init_seed)->capture_default_str();
  init->add_option("--out", init_out, "weight file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      gen_config.node_range = {node_range[0], node_range[1]};
      gen_config.tag_range = {tag_range[0], tag_range[1]};
      if (graph_model == "geometric") {
        gen_config.graph_model = GraphModel::kRandomGeometric;
      } else if (graph_model == "erdos-renyi") {
        gen_config.graph_model = GraphModel::kErdosRenyi;
      } else {
        throw UsageError("unknown graph model " + graph_model);
      }
      std::ostringstream out;
      io::write_corpus(out, generate_corpus(gen_config, count));
      write_text(gen_out, out.str());
    } else if (*solve) {
      const auto instance = io::parse_instance(read_text(solve_instance));
      std::shared_ptr<const gnn::GnnModel> model;
      const auto scheduler = make_scheduler(solve_scheduler, solve_opts, model);
      write_text(solve_out, io::emit_schedule(scheduler.run(instance)) + "\n");
    } else if (*validate) {
      const auto instance = io::parse_instance(read_text(validate_instance));
      const auto schedule = io::parse_schedule(read_text(validate_schedule_path), instance);
      const auto report = validate_schedule(instance, schedule);
      nlohmann::json violations = nlohmann::json::array();
      for (const auto& v : report.violations) {
        violations.push_back({{"slot", v.slot}, {"kind", to_string(v.kind)}, {"ids", v.ids}});
      }
      const auto cost = schedule_cost(instance, schedule);
      nlohmann::json out{{"valid", report.valid},
                         {"violations", violations},
                         {"never_interrogated", report.never_interrogated},
                         {"multiply_interrogated", report.multiply_interrogated},
                         {"C", cost.carriers},
                         {"L", cost.length},
                         {"objective", cost.objective}};
      std::cout << out.dump(2) << "\n";
      return report.valid ? 0 : kExitFailure;
    } else if (*bench) {
      std::ifstream in(corpus_path);
      if (!in) throw UsageError("cannot open " + corpus_path);
      const auto corpus = io::read_corpus(in);
      std::shared_ptr<const gnn::GnnModel> model;
      std::vector<NamedScheduler> schedulers;
      for (const auto& name : bench_schedulers) schedulers.push_back(make_scheduler(name, bench_opts, model));
      const auto report = run_benchmark(corpus, schedulers, reference, RadioParams{}, threads);
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw UsageError("cannot write " + csv_path);
        io::write_bench_csv(csv, report);
      }
      write_text(json_path, io::bench_report_json(report) + "\n");
    } else if (*serve) {
      service::ServiceContext context;
      context.model = load_model(serve_opts.weights, true);
      context.policy.repair = parse_policy(serve_opts.policy);
      context.budget.max_nodes = serve_opts.max_nodes;
      context.budget.time_limit = std::chrono::milliseconds(serve_opts.time_limit_ms);
      service::Server server(std::move(context));
      const int bound = server.bind(host, port);
      std::cerr << "listening on " << host << ":" << bound << "\n";
      server.listen();
    } else if (*init) {
      auto pe = pe_mode_from_string(init_pe);
      if (!pe) throw UsageError("unknown pe mode " + init_pe);
      init_config.pe_mode = *pe;
      init_config.input_dim = static_cast<std::uint32_t>(feature_dim(*pe));
      gnn::export_weights_file(gnn::random_model(init_config, init_seed), init_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitFailure;
  } catch (const gnn::ScheduleFailure& e) {
    std::cerr << "schedule failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SolverTimeout& e) {
    std::cerr << "solver timeout: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SolverLimitError& e) {
    std::cerr << "solver limit: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
