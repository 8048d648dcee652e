#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace eigenfeat::cnn {

struct Conv {
  std::size_t kernel = 3;
  std::size_t filters = 1;
  std::size_t pad = 1;
  std::size_t stride = 1;
  friend bool operator==(const Conv&, const Conv&) = default;
};
struct BatchNorm {
  double epsilon = 1e-5;
  friend bool operator==(const BatchNorm&, const BatchNorm&) = default;
};
struct ReLU {
  friend bool operator==(const ReLU&, const ReLU&) = default;
};
struct MaxPool {
  std::size_t size = 2;
  std::size_t stride = 2;
  friend bool operator==(const MaxPool&, const MaxPool&) = default;
};
struct FullyConnected {
  std::size_t outputs = 1;
  friend bool operator==(const FullyConnected&, const FullyConnected&) = default;
};
struct Dropout {
  double rate = 0.5;
  friend bool operator==(const Dropout&, const Dropout&) = default;
};
struct Softmax {
  friend bool operator==(const Softmax&, const Softmax&) = default;
};

using LayerSpec = std::variant<Conv, BatchNorm, ReLU, MaxPool, FullyConnected, Dropout, Softmax>;

/// Per-sample activation geometry.
struct Volume {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t size() const noexcept { return channels * height * width; }
  friend bool operator==(const Volume&, const Volume&) = default;
};

struct NetworkConfig {
  Volume input{1, 64, 64};
  std::vector<LayerSpec> layers;
  std::size_t classes = 4;
  /// Zero-center and divide by the standard deviation before the first layer.
  bool normalize_input = true;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 1e-2;
  std::size_t epochs = 10;
  double val_fraction = 0.3;
  std::size_t val_frequency = 5;
  double l2_lambda = 1e-4;
  double dropout_rate = 0.5;
  std::uint64_t seed = 1;
  bool deterministic = true;
  /// Expand every image into {identity, mirror, flip}.
  bool augment = true;
};

/// (in - kernel + 2 pad) / stride + 1; throws invalid_geometry when the
/// numerator is negative or not divisible by the stride.
std::size_t output_size(std::size_t in, std::size_t kernel, std::size_t pad, std::size_t stride);
/// Floor variant used by pooling: (in - size) / stride + 1.
std::size_t pooled_size(std::size_t in, std::size_t size, std::size_t stride);

/// Output geometry of one layer; throws invalid_geometry when infeasible.
Volume layer_output(const LayerSpec& layer, const Volume& in);
/// Geometry after each layer, index i = output of layers[i].
std::vector<Volume> trace_geometry(const NetworkConfig& config);

std::string layer_name(const LayerSpec& layer);
bool is_relu(const LayerSpec& layer);
bool is_conv(const LayerSpec& layer);

/// Checks LayerSpec invariants and the block structure: every Conv followed by
/// BatchNorm then ReLU; the tail is [Dropout,] FullyConnected{classes}, Softmax.
void validate(const NetworkConfig& config);
void validate(const TrainConfig& config);

/// Layer index of the k-th ReLU (1-based k, so relu_layer(cfg, 2) is "ReLU 2").
std::size_t relu_layer(const NetworkConfig& config, std::size_t k);

/// Five conv blocks 3/5/7/9/11 with 128/128/64/64/64 filters, pad 1, 266x266
/// input, dropout then FC{4}.
NetworkConfig full_scale_config(double dropout_rate = 0.5);
/// 64x64 input, three blocks 3/5/7 with 32/32/16 filters.
NetworkConfig desk_config(double dropout_rate = 0.5);

/// Halves the filter count of the first two conv layers and drops the last
/// conv block (conv, batchnorm, relu, maxpool).
NetworkConfig reduced_capacity_config(const NetworkConfig& config);

/// Canonical, line-oriented text form used inside checkpoint files.
std::string to_canonical_text(const NetworkConfig& config);
NetworkConfig parse_canonical_text(const std::string& text);

}  // namespace eigenfeat::cnn
