#include "tagsched/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

namespace tagsched::gnn {

namespace {

constexpr char kMagic[4] = {'R', 'G', 'W', 'T'};
constexpr double kLayerNormEps = 1e-5;
constexpr double kLeakySlope = 0.2;

std::string block_prefix(std::uint32_t b) { return "blocks." + std::to_string(b) + "."; }
std::string head_prefix(std::uint32_t b, std::uint32_t m) {
  return block_prefix(b) + "heads." + std::to_string(m) + ".";
}

// Linear weights are stored [out, in] row-major; the engine multiplies rows by in x out.
Eigen::MatrixXd as_right_operand(const Tensor& t) {
  const auto out = t.dims[0];
  const auto in = t.dims[1];
  Eigen::MatrixXd m(in, out);
  for (std::uint32_t o = 0; o < out; ++o) {
    for (std::uint32_t i = 0; i < in; ++i) m(i, o) = t.values[static_cast<std::size_t>(o) * in + i];
  }
  return m;
}

Eigen::RowVectorXd as_row(const Tensor& t) {
  Eigen::RowVectorXd r(t.values.size());
  for (std::size_t i = 0; i < t.values.size(); ++i) r(static_cast<Eigen::Index>(i)) = t.values[i];
  return r;
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool has(std::size_t count) const { return bytes_.size() - pos_ >= count; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  template <typename UInt>
  UInt read_uint(const std::string& context) {
    need(sizeof(UInt), context);
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= static_cast<UInt>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(UInt);
    return value;
  }

  float read_f32(const std::string& context) {
    const auto raw = read_uint<std::uint32_t>(context);
    float f;
    std::memcpy(&f, &raw, sizeof f);
    return f;
  }

  std::string read_string(std::size_t length, const std::string& context) {
    need(length, context);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), length);
    pos_ += length;
    return s;
  }

 private:
  void need(std::size_t count, const std::string& context) const {
    if (!has(count)) throw WeightIntegrityError(context, "weight file truncated while reading " + context);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class ByteWriter {
 public:
  template <typename UInt>
  void write_uint(UInt value) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) bytes_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  void write_f32(float f) {
    std::uint32_t raw;
    std::memcpy(&raw, &f, sizeof raw);
    write_uint(raw);
  }
  void write_bytes(const std::string& s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

}  // namespace

void GnnConfig::check() const {
  if (num_blocks == 0) throw GnnConfigError("num_blocks must be positive");
  if (num_heads == 0) throw GnnConfigError("num_heads must be positive");
  if (hidden_dim == 0 || hidden_dim % num_heads != 0) {
    throw GnnConfigError("hidden_dim " + std::to_string(hidden_dim) + " is not divisible by num_heads " +
                         std::to_string(num_heads));
  }
  if (static_cast<std::uint8_t>(pe_mode) > static_cast<std::uint8_t>(PeMode::kLaplacianEigenvalues)) {
    throw GnnConfigError("unknown pe_mode " + std::to_string(static_cast<int>(pe_mode)));
  }
  if (input_dim != feature_dim(pe_mode)) {
    throw GnnConfigError("input_dim " + std::to_string(input_dim) + " does not match pe_mode " + to_string(pe_mode));
  }
}

std::vector<Tensor> tensor_layout(const GnnConfig& config) {
  config.check();
  const auto h = config.hidden_dim;
  const auto hd = config.head_dim();
  std::vector<Tensor> layout;
  auto add = [&](std::string name, std::vector<std::uint32_t> dims) {
    std::size_t size = 1;
    for (auto d : dims) size *= d;
    layout.push_back(Tensor{std::move(name), std::move(dims), std::vector<float>(size, 0.0F)});
  };
  add("embed.weight", {h, config.input_dim});
  add("embed.bias", {h});
  add("embed_norm.weight", {h});
  add("embed_norm.bias", {h});
  for (std::uint32_t b = 0; b < config.num_blocks; ++b) {
    const auto p = block_prefix(b);
    add(p + "linear.weight", {h, h});
    add(p + "linear.bias", {h});
    add(p + "norm1.weight", {h});
    add(p + "norm1.bias", {h});
    for (std::uint32_t m = 0; m < config.num_heads; ++m) {
      const auto q = head_prefix(b, m);
      add(q + "query.weight", {hd, h});
      add(q + "key.weight", {hd, h});
      add(q + "value.weight", {hd, h});
      add(q + "score", {hd});
    }
    add(p + "output.weight", {h, h});
    add(p + "output.bias", {h});
    add(p + "norm2.weight", {h});
    add(p + "norm2.bias", {h});
  }
  add("classifier.weight", {static_cast<std::uint32_t>(kNumClasses), h});
  add("classifier.bias", {static_cast<std::uint32_t>(kNumClasses)});
  return layout;
}

GnnModel::GnnModel(GnnConfig config, std::vector<Tensor> tensors) : config_(config) {
  auto layout = tensor_layout(config_);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (!index.emplace(tensors[i].name, i).second) {
      throw WeightIntegrityError(tensors[i].name, "duplicate tensor " + tensors[i].name);
    }
  }
  for (auto& expected : layout) {
    auto it = index.find(expected.name);
    if (it == index.end()) throw WeightIntegrityError(expected.name, "missing tensor " + expected.name);
    auto& given = tensors[it->second];
    if (given.dims != expected.dims) {
      throw WeightIntegrityError(expected.name, "tensor " + expected.name + " has the wrong shape");
    }
    if (given.values.size() != expected.values.size()) {
      throw WeightIntegrityError(expected.name, "tensor " + expected.name + " has the wrong element count");
    }
    expected.values = std::move(given.values);
    index.erase(it);
  }
  if (!index.empty()) {
    const auto& name = index.begin()->first;
    throw WeightIntegrityError(name, "unexpected tensor " + name);
  }
  tensors_ = std::move(layout);

  std::map<std::string, const Tensor*> by_name;
  for (const auto& t : tensors_) by_name[t.name] = &t;
  auto get = [&](const std::string& name) -> const Tensor& { return *by_name.at(name); };
  auto norm = [&](const std::string& prefix) {
    return LayerNorm{as_row(get(prefix + ".weight")), as_row(get(prefix + ".bias"))};
  };

  embed_ = as_right_operand(get("embed.weight"));
  embed_bias_ = as_row(get("embed.bias"));
  embed_norm_ = norm("embed_norm");
  for (std::uint32_t b = 0; b < config_.num_blocks; ++b) {
    const auto p = block_prefix(b);
    Block block;
    block.linear = as_right_operand(get(p + "linear.weight"));
    block.linear_bias = as_row(get(p + "linear.bias"));
    block.norm1 = norm(p + "norm1");
    for (std::uint32_t m = 0; m < config_.num_heads; ++m) {
      const auto q = head_prefix(b, m);
      block.heads.push_back(Head{as_right_operand(get(q + "query.weight")), as_right_operand(get(q + "key.weight")),
                                 as_right_operand(get(q + "value.weight")), as_row(get(q + "score")).transpose()});
    }
    block.output = as_right_operand(get(p + "output.weight"));
    block.output_bias = as_row(get(p + "output.bias"));
    block.norm2 = norm(p + "norm2");
    blocks_.push_back(std::move(block));
  }
  classifier_ = as_right_operand(get("classifier.weight"));
  classifier_bias_ = as_row(get("classifier.bias"));
}

Eigen::MatrixXd GnnModel::layer_norm(const Eigen::MatrixXd& x, const LayerNorm& norm) {
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.row(r).mean();
    const Eigen::RowVectorXd centered = x.row(r).array() - mean;
    const double variance = centered.squaredNorm() / static_cast<double>(x.cols());
    y.row(r) = (centered / std::sqrt(variance + kLayerNormEps)).cwiseProduct(norm.gain) + norm.shift;
  }
  return y;
}

Eigen::MatrixXd GnnModel::attend(const Head& head, const Eigen::MatrixXd& h, const Topology& topology) const {
  const Eigen::MatrixXd queries = h * head.query;
  const Eigen::MatrixXd keys = h * head.key;
  const Eigen::MatrixXd values = h * head.value;
  const auto n = static_cast<NodeId>(h.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), values.cols());
  std::vector<NodeId> closed;
  std::vector<double> scores;
  for (NodeId v = 0; v < n; ++v) {
    closed.assign(1, v);
    const auto neighbors = topology.neighbors(v);
    closed.insert(closed.end(), neighbors.begin(), neighbors.end());
    scores.resize(closed.size());
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < closed.size(); ++k) {
      const Eigen::RowVectorXd pre = queries.row(v) + keys.row(closed[k]);
      const Eigen::RowVectorXd act = pre.unaryExpr([](double x) { return x >= 0.0 ? x : kLeakySlope * x; });
      scores[k] = act.dot(head.score.transpose());
      max_score = std::max(max_score, scores[k]);
    }
    double total = 0.0;
    for (auto& s : scores) {
      s = std::exp(s - max_score);
      total += s;
    }
    for (std::size_t k = 0; k < closed.size(); ++k) out.row(v) += (scores[k] / total) * values.row(closed[k]);
  }
  return out;
}

Eigen::MatrixXd GnnModel::forward(const FeatureMatrix& features, const Topology& topology) const {
  if (features.rows != topology.node_count()) throw InvalidInput("feature rows do not match node count");
  if (features.cols != config_.input_dim) {
    throw InvalidInput("feature width " + std::to_string(features.cols) + " does not match model input_dim " +
                       std::to_string(config_.input_dim));
  }
  const auto n = static_cast<Eigen::Index>(features.rows);
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(features.cols));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = features.at(r, c);
  }

  Eigen::MatrixXd h = layer_norm((x * embed_).rowwise() + embed_bias_, embed_norm_);
  const auto hd = static_cast<Eigen::Index>(config_.head_dim());
  for (const auto& block : blocks_) {
    const Eigen::MatrixXd transformed = ((h * block.linear).rowwise() + block.linear_bias).cwiseMax(0.0);
    const Eigen::MatrixXd z = layer_norm(h + transformed, block.norm1);
    Eigen::MatrixXd concat(n, static_cast<Eigen::Index>(config_.hidden_dim));
    for (std::size_t m = 0; m < block.heads.size(); ++m) {
      concat.middleCols(static_cast<Eigen::Index>(m) * hd, hd) = attend(block.heads[m], z, topology);
    }
    const Eigen::MatrixXd projected = (concat * block.output).rowwise() + block.output_bias;
    h = layer_norm(z + projected, block.norm2);
  }
  return (h * classifier_).rowwise() + classifier_bias_;
}

GnnModel load_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw WeightFormatError("not a weight file: bad magic");
  }
  ByteReader reader(bytes.subspan(sizeof kMagic));
  if (!reader.has(4)) throw WeightFormatError("weight file truncated before version");
  const auto version = reader.read_uint<std::uint32_t>("version");
  if (version != kWeightFormatVersion) {
    throw WeightFormatError("unsupported weight format version " + std::to_string(version));
  }
  GnnConfig config;
  config.num_blocks = reader.read_uint<std::uint32_t>("config");
  config.num_heads = reader.read_uint<std::uint32_t>("config");
  config.hidden_dim = reader.read_uint<std::uint32_t>("config");
  config.input_dim = reader.read_uint<std::uint32_t>("config");
  config.pe_mode = static_cast<PeMode>(reader.read_uint<std::uint8_t>("config"));
  config.check();

  const auto count = reader.read_uint<std::uint32_t>("tensor count");
  std::vector<Tensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor t;
    const auto name_length = reader.read_uint<std::uint16_t>("tensor name");
    t.name = reader.read_string(name_length, "tensor name");
    const auto rank = reader.read_uint<std::uint8_t>(t.name);
    std::size_t size = 1;
    for (std::uint8_t d = 0; d < rank; ++d) {
      t.dims.push_back(reader.read_uint<std::uint32_t>(t.name));
      size *= t.dims.back();
    }
    if (!reader.has(size * 4)) throw WeightIntegrityError(t.name, "weight file truncated inside tensor " + t.name);
    t.values.resize(size);
    for (auto& v : t.values) v = reader.read_f32(t.name);
    tensors.push_back(std::move(t));
  }
  if (reader.remaining() != 0) throw WeightIntegrityError("", "trailing bytes after the last tensor");
  return GnnModel(config, std::move(tensors));
}

GnnModel load_weights_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weight file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_weights(bytes);
}

std::vector<std::uint8_t> export_weights(const GnnModel& model) {
  ByteWriter w;
  w.write_bytes(std::string(kMagic, sizeof kMagic));
  w.write_uint(kWeightFormatVersion);
  const auto& c = model.config();
  w.write_uint(c.num_blocks);
  w.write_uint(c.num_heads);
  w.write_uint(c.hidden_dim);
  w.write_uint(c.input_dim);
  w.write_uint(static_cast<std::uint8_t>(c.pe_mode));
  w.write_uint(static_cast<std::uint32_t>(model.tensors().size()));
  for (const auto& t : model.tensors()) {
    w.write_uint(static_cast<std::uint16_t>(t.name.size()));
    w.write_bytes(t.name);
    w.write_uint(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) w.write_uint(d);
    for (float v : t.values) w.write_f32(v);
  }
  return w.take();
}

void export_weights_file(const GnnModel& model, const std::string& path) {
  const auto bytes = export_weights(model);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write weight file " + path);
}

GnnModel random_model(const GnnConfig& config, std::uint64_t seed, bool randomize_norms) {
  auto tensors = tensor_layout(config);
  std::mt19937_64 rng(seed);
  for (auto& t : tensors) {
    const bool is_norm = t.name.find("norm") != std::string::npos;
    if (is_norm && !randomize_norms) {
      const bool gain = t.name.ends_with(".weight");
      std::fill(t.values.begin(), t.values.end(), gain ? 1.0F : 0.0F);
      continue;
    }
    double limit = 0.5;
    if (t.dims.size() == 2) limit = std::sqrt(6.0 / static_cast<double>(t.dims[0] + t.dims[1]));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (auto& v : t.values) v = static_cast<float>(dist(rng));
  }
  return GnnModel(config, std::move(tensors));
}

GnnModel zero_model(const GnnConfig& config) { return GnnModel(config, tensor_layout(config)); }

}  // namespace tagsched::gnn
