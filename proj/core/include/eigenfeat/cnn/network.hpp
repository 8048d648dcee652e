#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "eigenfeat/cnn/config.hpp"
#include "eigenfeat/cnn/layers.hpp"
#include "eigenfeat/cnn/ops.hpp"
#include "eigenfeat/image.hpp"

namespace eigenfeat::cnn {

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::size_t iterations = 0;
  double final_train_loss = std::numeric_limits<double>::quiet_NaN();
  double final_val_loss = std::numeric_limits<double>::quiet_NaN();
  double final_val_accuracy = std::numeric_limits<double>::quiet_NaN();

  friend bool operator==(const TrainingMetadata& a, const TrainingMetadata& b);
};

/// Architecture plus trained parameters (in declaration order: per layer,
/// conv weight/bias, batchnorm scale/shift/running mean/running variance, fc
/// weight/bias).
struct Checkpoint {
  NetworkConfig config;
  std::vector<Tensor> parameters;
  TrainingMetadata metadata;

  /// Hex CRC32 of the serialized form; identifies a model in fingerprint files.
  std::string digest() const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

inline constexpr std::uint16_t kCheckpointVersion = 1;

/// "MCNN", u16 version, config text, u64 value count, f64 LE values,
/// metadata text, CRC32.
std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::string_view bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

class Network {
 public:
  /// Validates the config; parameters start at the deterministic defaults of
  /// Sequential::initialize with seed 0 replaced by zeros for weights.
  explicit Network(NetworkConfig config);
  explicit Network(const Checkpoint& ckpt);

  const NetworkConfig& config() const noexcept { return config_; }
  Sequential& stack() noexcept { return stack_; }
  const Sequential& stack() const noexcept { return stack_; }

  void initialize(std::uint64_t seed) { stack_.initialize(seed); }
  Checkpoint to_checkpoint(TrainingMetadata metadata = {}) const;

  /// (C, H, W) network input for one image, normalized when the config asks.
  Tensor input_tensor(const GrayImage& img) const;
  Tensor batch_tensor(std::span<const GrayImage* const> images) const;

  /// Inference-mode class probabilities.
  Prediction predict(const GrayImage& img);
  std::vector<Prediction> predict(std::span<const GrayImage* const> images);
  /// Inference-mode output of layer `layer_index`, shaped (C, H, W).
  Tensor activations(const GrayImage& img, std::size_t layer_index);

  std::vector<Parameter*> parameters() { return stack_.parameters(); }

 private:
  NetworkConfig config_;
  Sequential stack_;
};

Prediction predict(const Checkpoint& ckpt, const GrayImage& img);
Tensor activations_at(const Checkpoint& ckpt, const GrayImage& img, std::size_t layer_index);

}  // namespace eigenfeat::cnn
