#include "tagsched/service.hpp"

#include <httplib.h>

#include <json.hpp>

#include "tagsched/heuristic.hpp"
#include "tagsched/io.hpp"

namespace tagsched::service {

namespace {

Response error_response(int status, const std::string& kind, const std::string& message) {
  return Response{status, nlohmann::json{{"error", kind}, {"message", message}}.dump()};
}

}  // namespace

Response handle_schedule_request(const ServiceContext& context, const std::string& body, const std::string& scheduler) {
  ProblemInstance instance;
  try {
    instance = io::parse_instance(body);
  } catch (const io::ParseError& e) {
    return error_response(400, "parse_error", e.what());
  }
  try {
    Schedule schedule;
    if (scheduler == "heuristic") {
      schedule = solve_heuristic(instance);
    } else if (scheduler == "optimal") {
      schedule = solve_optimal(instance, context.budget);
    } else if (scheduler == "gnn") {
      if (!context.model) return error_response(400, "no_model", "service was started without GNN weights");
      schedule = gnn::schedule_with_gnn(*context.model, instance, context.policy);
    } else {
      return error_response(400, "bad_scheduler", "scheduler must be one of gnn, heuristic, optimal");
    }
    return Response{200, io::emit_schedule(schedule)};
  } catch (const InfeasibleError& e) {
    return error_response(422, "infeasible", e.what());
  } catch (const gnn::ScheduleFailure& e) {
    return error_response(422, "schedule_failure", e.what());
  } catch (const SolverTimeout& e) {
    return error_response(422, "solver_timeout", e.what());
  } catch (const SolverLimitError& e) {
    return error_response(422, "solver_limit", e.what());
  } catch (const InvalidInput& e) {
    return error_response(422, "invalid_instance", e.what());
  }
}

struct Server::Impl {
  ServiceContext context;
  httplib::Server http;
};

Server::Server(ServiceContext context) : impl_(std::make_unique<Impl>()) {
  impl_->context = std::move(context);
  impl_->http.Post("/schedule", [this](const httplib::Request& req, httplib::Response& res) {
    const auto scheduler = req.has_param("scheduler") ? req.get_param_value("scheduler") : std::string("gnn");
    const auto out = handle_schedule_request(impl_->context, req.body, scheduler);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace tagsched::service
