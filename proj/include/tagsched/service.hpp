#pragma once

#include <memory>
#include <string>

#include "tagsched/exact_solver.hpp"
#include "tagsched/gnn.hpp"
#include "tagsched/gnn_scheduler.hpp"

namespace tagsched::service {

// Shared, read-only state for all requests.
struct ServiceContext {
  std::shared_ptr<const gnn::GnnModel> model;
  gnn::InferencePolicy policy;
  SolverBudget budget;
};

struct Response {
  int status = 200;
  std::string body;
};

/// POST /schedule?scheduler={gnn,heuristic,optimal} with an instance JSON body.
/// 200 schedule JSON; 400 parse error or unknown scheduler; 422 infeasible
/// instance or scheduling failure.
Response handle_schedule_request(const ServiceContext& context, const std::string& body, const std::string& scheduler);

class Server {
 public:
  explicit Server(ServiceContext context);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds `host:port`; port 0 picks a free port. Throws std::runtime_error on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tagsched::service
