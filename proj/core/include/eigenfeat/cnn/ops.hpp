#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eigenfeat/tensor.hpp"

namespace eigenfeat::cnn {

enum class Mode { train, infer };

// Convolution -------------------------------------------------------------
//
// Input is (C, H, W) for one sample or (N, C, H, W) for a batch; the output
// keeps the input's rank. Weights are (F, C, k, k); each output site is the
// windowed weighted sum (cross-correlation) plus the filter bias.

Tensor conv_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias, std::size_t pad,
                    std::size_t stride);

struct ConvGradients {
  Tensor input;    // empty when not requested
  Tensor weights;  // (F, C, k, k)
  std::vector<double> bias;
};

ConvGradients conv_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                            std::size_t pad, std::size_t stride, bool need_input_grad = true);

// Batch normalization ------------------------------------------------------
//
// Accepts (N, C) or (N, C, H, W); statistics are per channel over N*H*W.

struct RunningStats {
  std::vector<double> mean;
  std::vector<double> var;
  bool populated = false;
};

struct BatchNormCache {
  std::vector<double> normalized;  // x-hat, same layout as the input
  std::vector<double> inv_std;     // per channel
  Mode mode = Mode::train;
};

/// Train mode normalizes with the batch mean and biased variance and folds
/// them into `stats` (running = momentum * running + (1 - momentum) * batch).
/// Infer mode uses `stats`, which must be populated.
Tensor batchnorm_forward(const Tensor& batch, std::span<const double> scale, std::span<const double> shift,
                         double eps, Mode mode, RunningStats* stats, double momentum = 0.9,
                         BatchNormCache* cache = nullptr);

struct BatchNormGradients {
  Tensor input;
  std::vector<double> scale;
  std::vector<double> shift;
};

BatchNormGradients batchnorm_backward(const BatchNormCache& cache, const Tensor& grad_output,
                                      std::span<const double> scale);

// Elementwise and pooling ----------------------------------------------------

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& input, const Tensor& grad_output);

/// Windowed maximum over (C, H, W) or (N, C, H, W); partial windows at the
/// right/bottom edge are dropped. `argmax` (optional) receives the flat input
/// index of each output's maximum (first in row-major window order on ties).
Tensor maxpool_forward(const Tensor& input, std::size_t size, std::size_t stride,
                       std::vector<std::size_t>* argmax = nullptr);
Tensor maxpool_backward(const Shape& input_shape, std::span<const std::size_t> argmax, const Tensor& grad_output);

/// Inverted dropout. Train mode zeroes each element with probability `rate`
/// and scales survivors by 1/(1 - rate); infer mode is the identity.
Tensor dropout_forward(const Tensor& input, double rate, Mode mode, std::uint64_t seed,
                       std::vector<double>* mask = nullptr);

// Fully connected -------------------------------------------------------------
//
// h_j = sum_i x_i w_ij + b_j with weights shaped (inputs, outputs). Input is a
// single vector or (N, ...) flattened per sample.

Tensor fc_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias);

struct FcGradients {
  Tensor input;
  Tensor weights;
  std::vector<double> bias;
};

FcGradients fc_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output);

// Softmax and loss ----------------------------------------------------------------

/// Class probabilities for one score vector.
struct Prediction {
  std::vector<double> probabilities;
  std::size_t argmax() const;
};

Prediction softmax(std::span<const double> z);
/// Row-wise softmax of (N, K) scores.
Tensor softmax(const Tensor& z);
Tensor softmax_backward(const Tensor& y, const Tensor& grad_y);

/// J = -sum_i sum_j t_ij ln y_ij with y clamped below at 1e-12. Labels must be
/// one-hot rows.
double cross_entropy(const Tensor& probabilities, const Tensor& one_hot);
double cross_entropy(std::span<const Prediction> predictions, std::span<const std::vector<double>> one_hot);
/// dJ/dy scaled by `scale` (1/batch during training).
Tensor cross_entropy_grad(const Tensor& probabilities, const Tensor& one_hot, double scale);

Tensor one_hot(std::span<const std::size_t> labels, std::size_t classes);

/// J + lambda * 0.5 * sum w^2 over the given weight tensors.
double l2_regularized_loss(double loss, std::span<const Tensor* const> weights, double lambda);

/// theta <- theta - learning_rate * grad
void sgd_step(Tensor& parameter, const Tensor& gradient, double learning_rate);

}  // namespace eigenfeat::cnn
