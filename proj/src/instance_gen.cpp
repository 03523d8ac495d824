#include "tagsched/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tagsched {

namespace {

void check_range(const IntRange& range, std::size_t lower_bound, const char* name) {
  if (range.min > range.max || range.min < lower_bound) {
    throw GenerationError(std::string(name) + ": range [" + std::to_string(range.min) + "," +
                          std::to_string(range.max) + "] is empty or below " + std::to_string(lower_bound));
  }
}

std::vector<Edge> sample_edges(std::size_t n, const GeneratorConfig& config, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (config.graph_model == GraphModel::kRandomGeometric) {
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = unit(rng);
      ys[i] = unit(rng);
    }
    const double r2 = config.model_parameter * config.model_parameter;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const double dx = xs[u] - xs[v];
        const double dy = ys[u] - ys[v];
        if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
      }
    }
  } else {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (unit(rng) < config.model_parameter) edges.emplace_back(u, v);
      }
    }
  }
  return edges;
}

ProblemInstance draw_instance(const GeneratorConfig& config, std::mt19937_64& rng) {
  check_range(config.node_range, 1, "node_range");
  check_range(config.tag_range, 1, "tag_range");
  if (!(config.model_parameter > 0.0)) throw GenerationError("graph model parameter must be positive");

  std::uniform_int_distribution<std::size_t> node_dist(config.node_range.min, config.node_range.max);
  const std::size_t n = node_dist(rng);
  std::vector<Edge> edges;
  bool connected = false;
  for (std::size_t attempt = 0; attempt < config.max_attempts && !connected; ++attempt) {
    edges = sample_edges(n, config, rng);
    connected = is_connected(n, edges);
  }
  if (!connected) {
    throw GenerationError("no connected topology with " + std::to_string(n) + " nodes after " +
                          std::to_string(config.max_attempts) + " attempts");
  }

  std::uniform_int_distribution<std::size_t> tag_dist(config.tag_range.min, config.tag_range.max);
  const std::size_t t = tag_dist(rng);
  std::uniform_int_distribution<NodeId> host_dist(0, static_cast<NodeId>(n - 1));
  std::vector<Tag> tags;
  tags.reserve(t);
  for (std::size_t i = 0; i < t; ++i) tags.push_back(Tag{static_cast<TagId>(i + 1), host_dist(rng)});
  return ProblemInstance(Topology(n, std::move(edges)), std::move(tags));
}

}  // namespace

ProblemInstance generate_instance(const GeneratorConfig& config) {
  std::mt19937_64 rng(config.seed);
  return draw_instance(config, rng);
}

std::vector<ProblemInstance> generate_corpus(const GeneratorConfig& config, std::size_t count) {
  std::mt19937_64 rng(config.seed);
  std::vector<ProblemInstance> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) corpus.push_back(draw_instance(config, rng));
  return corpus;
}

const char* to_string(PeMode mode) {
  switch (mode) {
    case PeMode::kNone:
      return "none";
    case PeMode::kDegree:
      return "degree";
    case PeMode::kLaplacianEigenvalues:
      return "laplacian";
  }
  return "?";
}

std::optional<PeMode> pe_mode_from_string(const std::string& text) {
  if (text == "none") return PeMode::kNone;
  if (text == "degree") return PeMode::kDegree;
  if (text == "laplacian") return PeMode::kLaplacianEigenvalues;
  return std::nullopt;
}

std::size_t feature_dim(PeMode mode) { return mode == PeMode::kNone ? 3 : 4; }

std::vector<double> node_degrees(const Topology& topology) {
  const std::size_t n = topology.node_count();
  std::vector<double> degrees(n);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) max_degree = std::max(max_degree, topology.degree(v));
  if (max_degree == 0) return degrees;
  for (NodeId v = 0; v < n; ++v) {
    degrees[v] = static_cast<double>(topology.degree(v)) / static_cast<double>(max_degree);
  }
  return degrees;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n, double tolerance,
                                          std::size_t max_sweeps) {
  if (a.size() != n * n) throw NumericalError("symmetric_eigenvalues: matrix is not n x n");
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sum += 2.0 * at(i, j) * at(i, j);
    }
    return std::sqrt(sum);
  };

  bool converged = off_norm() <= tolerance;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = at(r, p);
          const double h = at(r, q);
          at(r, p) = at(p, r) = g - s * (h + g * tau);
          at(r, q) = at(q, r) = h + s * (g - h * tau);
        }
      }
    }
    converged = off_norm() <= tolerance;
  }
  if (!converged) {
    throw NumericalError("Jacobi eigensolver did not converge within " + std::to_string(max_sweeps) + " sweeps");
  }
  std::vector<double> eigenvalues(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = at(i, i);
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

std::vector<double> laplacian_eigenvalues(const Topology& topology) {
  const std::size_t n = topology.node_count();
  std::vector<double> inv_sqrt_degree(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto d = topology.degree(v);
    inv_sqrt_degree[v] = d == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(d));
  }
  std::vector<double> laplacian(n * n, 0.0);
  for (NodeId v = 0; v < n; ++v) laplacian[v * n + v] = topology.degree(v) == 0 ? 0.0 : 1.0;
  for (const auto& [u, v] : topology.edges()) {
    const double w = -inv_sqrt_degree[u] * inv_sqrt_degree[v];
    laplacian[u * n + v] = w;
    laplacian[v * n + u] = w;
  }
  auto eigenvalues = symmetric_eigenvalues(std::move(laplacian), n);
  const double largest = eigenvalues.back();
  for (auto& lambda : eigenvalues) {
    if (largest > 0.0) lambda /= largest;
    lambda = std::clamp(lambda, 0.0, 1.0);
  }
  return eigenvalues;
}

FeatureMatrix build_feature_matrix(const ProblemInstance& instance, std::span<const TagId> remaining_tags,
                                   PeMode pe) {
  const std::size_t n = instance.node_count();
  FeatureMatrix features;
  features.rows = n;
  features.cols = feature_dim(pe);
  features.values.assign(n * features.cols, 0.0);

  const double id_scale = n > 1 ? 1.0 / static_cast<double>(n - 1) : 0.0;
  const double tag_scale = instance.max_tag_id() > 0 ? 1.0 / static_cast<double>(instance.max_tag_id()) : 0.0;
  std::vector<TagId> min_tag(n, 0);
  for (TagId tag : remaining_tags) {
    if (!instance.has_tag(tag)) throw InvalidInput("remaining tag " + std::to_string(tag) + " is not in the instance");
    const NodeId host = instance.host_of(tag);
    features.at(host, kHostedTagsColumn) += 1.0;
    if (min_tag[host] == 0 || tag < min_tag[host]) min_tag[host] = tag;
  }
  for (NodeId v = 0; v < n; ++v) {
    features.at(v, kNodeIdColumn) = static_cast<double>(v) * id_scale;
    features.at(v, kMinTagColumn) = static_cast<double>(min_tag[v]) * tag_scale;
  }
  if (pe != PeMode::kNone) {
    const auto column =
        pe == PeMode::kDegree ? node_degrees(instance.topology()) : laplacian_eigenvalues(instance.topology());
    for (NodeId v = 0; v < n; ++v) features.at(v, kPeColumn) = column[v];
  }
  return features;
}

}  // namespace tagsched
