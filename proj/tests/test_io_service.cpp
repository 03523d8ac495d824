#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "tagsched/exact_solver.hpp"
#include "tagsched/heuristic.hpp"
#include "tagsched/io.hpp"
#include "tagsched/service.hpp"
#include "tagsched/validate.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that collides with Eigen internals.
#include <httplib.h>

using namespace tagsched;
using namespace tagsched::testing;
using nlohmann::json;

namespace {

const char* kPathInstance = R"({"nodes":2,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})";

std::string parse_error_field(const std::string& text) {
  try {
    io::parse_instance(text);
  } catch (const io::ParseError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_instance: the path example") {
  const auto inst = io::parse_instance(kPathInstance);
  CHECK(inst == make_instance(2, {{0, 1}}, {{1, 0}}));
}

TEST_CASE("parse_instance: errors name the field") {
  CHECK(parse_error_field(R"({"nodes":3,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})") == "edges");
  CHECK(parse_error_field(R"({"nodes":2,"edges":[[0,1]],"tags":[{"id":1,"host":0},{"id":1,"host":1}]})") ==
        "tags");
  CHECK_FALSE(parse_error_field("{not json").empty());
  CHECK_FALSE(parse_error_field(R"({"edges":[],"tags":[]})").empty());
  CHECK_FALSE(parse_error_field(R"({"nodes":-2,"edges":[],"tags":[]})").empty());
  CHECK_FALSE(parse_error_field(R"({"nodes":2,"edges":[[0,1,1]],"tags":[]})").empty());
  CHECK_FALSE(parse_error_field(R"({"nodes":2,"edges":[[0,1]],"tags":[{"id":0,"host":0}]})").empty());
  CHECK_FALSE(parse_error_field(R"([1,2])").empty());
}

TEST_CASE("schedule JSON: examples round-trip") {
  const auto path = make_instance(2, {{0, 1}}, {{1, 0}});
  const auto s = solve_optimal(path);
  const auto text = io::emit_schedule(s);
  const auto j = json::parse(text);
  CHECK(j["L"] == 1);
  CHECK(j["C"] == 1);
  CHECK(j["slots"][0]["interrogations"][0] == json{{"node", 0}, {"tag", 1}, {"carrier", 1}});
  CHECK(io::parse_schedule(text, path) == s);

  const auto star = ProblemInstance(star_graph(2), {{1, 0}, {2, 0}});
  const auto s2 = solve_optimal(star);
  CHECK(io::parse_schedule(io::emit_schedule(s2), star) == s2);

  const auto path3 = make_instance(3, {{0, 1}, {1, 2}}, {{1, 0}, {2, 2}});
  const auto s3 = solve_optimal(path3);
  CHECK(io::parse_schedule(io::emit_schedule(s3), path3) == s3);
}

TEST_CASE("schedule JSON: carriers default to the record carriers; totals are checked") {
  const auto path = make_instance(2, {{0, 1}}, {{1, 0}});
  const auto s = io::parse_schedule(R"({"L":1,"C":1,"slots":[{"interrogations":[{"node":0,"tag":1,"carrier":1}]}]})",
                                    path);
  CHECK(s == solve_optimal(path));
  CHECK_THROWS_AS(
      io::parse_schedule(R"({"L":2,"C":1,"slots":[{"interrogations":[{"node":0,"tag":1,"carrier":1}]}]})", path),
      io::ParseError);
  CHECK_THROWS_AS(
      io::parse_schedule(R"({"L":1,"C":1,"slots":[{"interrogations":[{"node":5,"tag":1,"carrier":1}]}]})", path),
      io::ParseError);
}

TEST_CASE("round trip: instances and schedules on small instances") {
  for (const auto& inst : oracle_corpus(3, 3)) {
    CHECK(io::parse_instance(io::emit_instance(inst)) == inst);
    if (inst.node_count() == 1) continue;
    const auto s = solve_heuristic(inst);
    CHECK(io::parse_schedule(io::emit_schedule(s), inst) == s);
  }
}

TEST_CASE("corpus JSONL round trip") {
  std::mt19937_64 rng(41);
  std::vector<ProblemInstance> corpus;
  for (int i = 0; i < 25; ++i) corpus.push_back(random_small_instance(rng, 2 + i % 6, 1 + i % 5));
  std::stringstream buffer;
  io::write_corpus(buffer, corpus);
  CHECK(io::read_corpus(buffer) == corpus);
}

TEST_CASE("bench CSV and JSON reports") {
  const std::vector<ProblemInstance> corpus{make_instance(2, {{0, 1}}, {{1, 0}}), make_instance(1, {}, {{1, 0}})};
  const std::vector<NamedScheduler> schedulers{
      {"optimal", [](const ProblemInstance& i) { return solve_optimal(i); }},
      {"heuristic", [](const ProblemInstance& i) { return solve_heuristic(i); }}};
  const auto report = run_benchmark(corpus, schedulers, "optimal");
  std::ostringstream csv;
  io::write_bench_csv(csv, report);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "instance_id,N,T,scheduler,success,C,L,objective,runtime_ms");
  std::getline(lines, line);
  CHECK(line.starts_with("0,2,1,optimal,1,1,1,2,"));
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  const auto j = json::parse(io::bench_report_json(report));
  CHECK(j["reference"] == "optimal");
  CHECK(j.contains("sign_convention"));
}

TEST_CASE("service handler: contract examples") {
  service::ServiceContext ctx;
  const auto ok = service::handle_schedule_request(ctx, kPathInstance, "heuristic");
  CHECK(ok.status == 200);
  CHECK(json::parse(ok.body)["L"] == 1);

  const auto bad = service::handle_schedule_request(
      ctx, R"({"nodes":3,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})", "heuristic");
  CHECK(bad.status == 400);

  const auto infeasible =
      service::handle_schedule_request(ctx, R"({"nodes":1,"edges":[],"tags":[{"id":1,"host":0}]})", "optimal");
  CHECK(infeasible.status == 422);
  CHECK(json::parse(infeasible.body)["error"] == "infeasible");

  CHECK(service::handle_schedule_request(ctx, kPathInstance, "magic").status == 400);
  CHECK(service::handle_schedule_request(ctx, kPathInstance, "gnn").status == 400);
}

TEST_CASE("service over HTTP") {
  service::ServiceContext ctx;
  gnn::GnnConfig config;
  config.num_blocks = 1;
  config.num_heads = 2;
  config.hidden_dim = 8;
  ctx.model = std::make_shared<const gnn::GnnModel>(gnn::zero_model(config));
  ctx.policy.repair = gnn::RepairPolicy::kHeuristicFallback;

  service::Server server(ctx);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto post = [&](const std::string& query, const std::string& body) {
    return client.Post("/schedule" + query, body, "application/json");
  };

  const auto ok = post("?scheduler=heuristic", kPathInstance);
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(json::parse(ok->body)["slots"].size() == 1);

  const auto bad = post("?scheduler=heuristic", R"({"nodes":3,"edges":[[0,1]],"tags":[{"id":1,"host":0}]})");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  const auto infeasible = post("?scheduler=optimal", R"({"nodes":1,"edges":[],"tags":[{"id":1,"host":0}]})");
  REQUIRE(infeasible);
  CHECK(infeasible->status == 422);

  const auto gnn_first = post("", kPathInstance);
  const auto gnn_second = post("?scheduler=gnn", kPathInstance);
  REQUIRE(gnn_first);
  REQUIRE(gnn_second);
  CHECK(gnn_first->status == 200);
  CHECK(gnn_first->body == gnn_second->body);

  std::vector<std::thread> clients;
  std::atomic<int> successes{0};
  for (int i = 0; i < 8; ++i) {
    clients.emplace_back([&] {
      httplib::Client c("127.0.0.1", port);
      const auto r = c.Post("/schedule?scheduler=optimal", kPathInstance, "application/json");
      if (r && r->status == 200 && r->body == ok->body) ++successes;
    });
  }
  for (auto& t : clients) t.join();
  CHECK(successes == 8);

  server.stop();
  worker.join();
}
