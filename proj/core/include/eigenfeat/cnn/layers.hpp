#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eigenfeat/cnn/config.hpp"
#include "eigenfeat/cnn/ops.hpp"
#include "eigenfeat/tensor.hpp"

namespace eigenfeat::cnn {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;
  /// Included in the L2 penalty (conv and fc weights only).
  bool regularized = false;
};

struct ForwardContext {
  Mode mode = Mode::infer;
  /// Seed for dropout masks; a layer at index i uses derive_seed(seed, "dropout", {i}).
  std::uint64_t dropout_seed = 0;
};

/// One network stage operating on a whole batch. Forward caches what backward
/// needs; backward accumulates nothing across calls (gradients are overwritten).
class Layer {
 public:
  virtual ~Layer() = default;

  virtual LayerSpec spec() const = 0;
  virtual Tensor forward(const Tensor& x, const ForwardContext& ctx) = 0;
  virtual Tensor backward(const Tensor& grad_output) = 0;

  std::span<Parameter> parameters() noexcept { return params_; }
  std::span<const Parameter> parameters() const noexcept { return params_; }

  /// Skip the input gradient (first layer).
  void set_input_grad(bool on) noexcept { input_grad_ = on; }
  void set_index(std::size_t index) noexcept { index_ = index; }

 protected:
  std::vector<Parameter> params_;
  bool input_grad_ = true;
  std::size_t index_ = 0;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Volume& input);

/// Ordered chain of layers without any structural constraints; Network adds
/// the classification-specific validation on top.
class Sequential {
 public:
  Sequential(Volume input, const std::vector<LayerSpec>& layers);

  Sequential(const Sequential&) = delete;
  Sequential& operator=(const Sequential&) = delete;
  Sequential(Sequential&&) = default;
  Sequential& operator=(Sequential&&) = default;

  const Volume& input() const noexcept { return input_; }
  std::size_t size() const noexcept { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }

  /// Runs layers [0, stop] (all when stop is empty) on an (N, C, H, W) batch.
  Tensor forward(const Tensor& batch, const ForwardContext& ctx, std::optional<std::size_t> stop = {});
  /// Backpropagates through every layer; requires a full forward first.
  Tensor backward(const Tensor& grad_output);

  /// All parameters in declaration order.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  /// Uniform(+-sqrt(6 / fan_in)) weights, zero biases, unit batchnorm scale,
  /// zero shift, running mean 0 / variance 1.
  void initialize(std::uint64_t seed);

  void set_input_grad(bool on);

 private:
  Volume input_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace eigenfeat::cnn
