#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagsched/core.hpp"
#include "tagsched/instance_gen.hpp"

namespace tagsched::gnn {

// Output classes, in logit-column order. Ties resolve to the lowest index.
inline constexpr std::size_t kClassTagQuery = 0;
inline constexpr std::size_t kClassCarrier = 1;
inline constexpr std::size_t kClassIdle = 2;
inline constexpr std::size_t kNumClasses = 3;

class WeightFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WeightIntegrityError : public std::runtime_error {
 public:
  WeightIntegrityError(std::string tensor, const std::string& what)
      : std::runtime_error(what), tensor_(std::move(tensor)) {}
  const std::string& tensor() const { return tensor_; }

 private:
  std::string tensor_;
};

class GnnConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GnnConfig {
  std::uint32_t num_blocks = 12;
  std::uint32_t num_heads = 12;
  std::uint32_t hidden_dim = 72;
  PeMode pe_mode = PeMode::kDegree;
  std::uint32_t input_dim = 4;

  std::uint32_t head_dim() const { return hidden_dim / num_heads; }
  /// Throws GnnConfigError when an invariant fails.
  void check() const;
  bool operator==(const GnnConfig&) const = default;
};

struct Tensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;  // row-major
};

/// Tensor names and shapes a config requires, in file order.
std::vector<Tensor> tensor_layout(const GnnConfig& config);

/// Immutable weight set for the attention network:
///   embedding linear + layer norm,
///   per block: h <- LN1(h + relu(W h)); heads attend over the closed
///   neighborhood with score a . leaky_relu(q_v + k_u); concat -> output linear;
///   h <- LN2(h + out),
///   node-wise 3-class classifier.
class GnnModel {
 public:
  /// Takes ownership of `tensors`; they must match tensor_layout(config) exactly by name and shape.
  GnnModel(GnnConfig config, std::vector<Tensor> tensors);

  const GnnConfig& config() const { return config_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  /// N x 3 logits, rows in node order.
  Eigen::MatrixXd forward(const FeatureMatrix& features, const Topology& topology) const;

 private:
  struct LayerNorm {
    Eigen::RowVectorXd gain;
    Eigen::RowVectorXd shift;
  };
  struct Head {
    Eigen::MatrixXd query;  // hidden x head_dim, applied as h * query
    Eigen::MatrixXd key;
    Eigen::MatrixXd value;
    Eigen::VectorXd score;
  };
  struct Block {
    Eigen::MatrixXd linear;
    Eigen::RowVectorXd linear_bias;
    LayerNorm norm1;
    std::vector<Head> heads;
    Eigen::MatrixXd output;
    Eigen::RowVectorXd output_bias;
    LayerNorm norm2;
  };

  static Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x, const LayerNorm& norm);
  Eigen::MatrixXd attend(const Head& head, const Eigen::MatrixXd& h, const Topology& topology) const;

  GnnConfig config_;
  std::vector<Tensor> tensors_;
  Eigen::MatrixXd embed_;
  Eigen::RowVectorXd embed_bias_;
  LayerNorm embed_norm_;
  std::vector<Block> blocks_;
  Eigen::MatrixXd classifier_;
  Eigen::RowVectorXd classifier_bias_;
};

/// Parses the little-endian "RGWT" weight file.
/// WeightFormatError: bad magic or version. GnnConfigError: inconsistent config block.
/// WeightIntegrityError: truncation, unknown/missing/duplicate tensor, or shape mismatch.
GnnModel load_weights(std::span<const std::uint8_t> bytes);
GnnModel load_weights_file(const std::string& path);

std::vector<std::uint8_t> export_weights(const GnnModel& model);
void export_weights_file(const GnnModel& model, const std::string& path);

inline constexpr std::uint32_t kWeightFormatVersion = 1;

/// Deterministic Glorot-uniform initialization; layer norms start at gain 1, shift 0
/// unless `randomize_norms` is set.
GnnModel random_model(const GnnConfig& config, std::uint64_t seed, bool randomize_norms = false);
/// Every tensor zero.
GnnModel zero_model(const GnnConfig& config);

}  // namespace tagsched::gnn
