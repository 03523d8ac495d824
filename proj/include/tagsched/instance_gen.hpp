#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagsched/core.hpp"

namespace tagsched {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GraphModel : std::uint8_t { kRandomGeometric, kErdosRenyi };

struct IntRange {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct GeneratorConfig {
  IntRange node_range{2, 10};
  IntRange tag_range{1, 14};
  GraphModel graph_model = GraphModel::kRandomGeometric;
  // Connection radius in the unit square (geometric) or edge probability (Erdos-Renyi).
  double model_parameter = 0.5;
  std::uint64_t seed = 0;
  // Topologies are re-sampled until connected, at most this many times.
  std::size_t max_attempts = 1000;
};

/// Throws GenerationError for empty ranges or when no connected topology is
/// found within `max_attempts`. Deterministic in `config.seed`.
ProblemInstance generate_instance(const GeneratorConfig& config);

/// `count` instances drawn from one PRNG stream seeded by `config.seed`.
std::vector<ProblemInstance> generate_corpus(const GeneratorConfig& config, std::size_t count);

enum class PeMode : std::uint8_t { kNone = 0, kDegree = 1, kLaplacianEigenvalues = 2 };

const char* to_string(PeMode mode);
std::optional<PeMode> pe_mode_from_string(const std::string& text);
std::size_t feature_dim(PeMode mode);

/// degree(u) / max degree; zero vector when the graph has no edges.
std::vector<double> node_degrees(const Topology& topology);

/// Eigenvalues of I - D^-1/2 A D^-1/2, ascending, divided by the largest one
/// when it is nonzero. Isolated nodes contribute a zero diagonal entry.
std::vector<double> laplacian_eigenvalues(const Topology& topology);

/// Cyclic Jacobi eigenvalues of a dense symmetric row-major n x n matrix, ascending.
/// Converges when the off-diagonal Frobenius norm drops to `tolerance`.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, std::size_t n, double tolerance = 1e-10,
                                          std::size_t max_sweeps = 100);

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

// Column layout of FeatureMatrix.
inline constexpr std::size_t kHostedTagsColumn = 0;
inline constexpr std::size_t kNodeIdColumn = 1;
inline constexpr std::size_t kMinTagColumn = 2;
inline constexpr std::size_t kPeColumn = 3;

/// Per-node input features over the tags still to be interrogated:
/// [remaining hosted tags, node ID / (N-1), min remaining tag ID / max tag ID (0 if none), PE].
FeatureMatrix build_feature_matrix(const ProblemInstance& instance, std::span<const TagId> remaining_tags,
                                   PeMode pe);

}  // namespace tagsched
