#include "eigenfeat/cnn/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eigenfeat/cnn/config.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/parallel.hpp"
#include "eigenfeat/rng.hpp"

namespace eigenfeat::cnn {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

/// (N, C, H, W) view of a rank-3 or rank-4 tensor.
struct Nchw {
  std::size_t n, c, h, w;
  bool batched;
};

Nchw as_nchw(const Tensor& t, const char* what) {
  if (t.rank() == 4) return {t.dim(0), t.dim(1), t.dim(2), t.dim(3), true};
  if (t.rank() == 3) return {1, t.dim(0), t.dim(1), t.dim(2), false};
  fail(ErrorCode::shape_mismatch, std::string(what) + " expects (C,H,W) or (N,C,H,W), got " +
                                      shape_string(t.shape()));
}

Shape make_shape(const Nchw& g, std::size_t c, std::size_t h, std::size_t w) {
  return g.batched ? Shape{g.n, c, h, w} : Shape{c, h, w};
}

struct ConvGeometry {
  std::size_t channels, height, width, kernel, pad, stride, out_h, out_w;
  std::size_t patch() const { return channels * kernel * kernel; }
  std::size_t sites() const { return out_h * out_w; }
};

void im2col(const double* in, const ConvGeometry& g, double* cols) {
  const std::size_t sites = g.sites();
  for (std::size_t c = 0; c < g.channels; ++c)
    for (std::size_t ky = 0; ky < g.kernel; ++ky)
      for (std::size_t kx = 0; kx < g.kernel; ++kx) {
        double* row = cols + ((c * g.kernel + ky) * g.kernel + kx) * sites;
        const double* plane = in + c * g.height * g.width;
        for (std::size_t oy = 0; oy < g.out_h; ++oy) {
          const long iy = static_cast<long>(oy * g.stride + ky) - static_cast<long>(g.pad);
          double* dst = row + oy * g.out_w;
          if (iy < 0 || iy >= static_cast<long>(g.height)) {
            std::fill(dst, dst + g.out_w, 0.0);
            continue;
          }
          const double* src = plane + static_cast<std::size_t>(iy) * g.width;
          for (std::size_t ox = 0; ox < g.out_w; ++ox) {
            const long ix = static_cast<long>(ox * g.stride + kx) - static_cast<long>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<long>(g.width)) ? 0.0 : src[ix];
          }
        }
      }
}

void col2im(const double* cols, const ConvGeometry& g, double* out) {
  std::fill(out, out + g.channels * g.height * g.width, 0.0);
  const std::size_t sites = g.sites();
  for (std::size_t c = 0; c < g.channels; ++c)
    for (std::size_t ky = 0; ky < g.kernel; ++ky)
      for (std::size_t kx = 0; kx < g.kernel; ++kx) {
        const double* row = cols + ((c * g.kernel + ky) * g.kernel + kx) * sites;
        double* plane = out + c * g.height * g.width;
        for (std::size_t oy = 0; oy < g.out_h; ++oy) {
          const long iy = static_cast<long>(oy * g.stride + ky) - static_cast<long>(g.pad);
          if (iy < 0 || iy >= static_cast<long>(g.height)) continue;
          double* dst = plane + static_cast<std::size_t>(iy) * g.width;
          for (std::size_t ox = 0; ox < g.out_w; ++ox) {
            const long ix = static_cast<long>(ox * g.stride + kx) - static_cast<long>(g.pad);
            if (ix >= 0 && ix < static_cast<long>(g.width)) dst[ix] += row[oy * g.out_w + ox];
          }
        }
      }
}

ConvGeometry conv_geometry(const Nchw& in, const Tensor& weights, std::size_t pad, std::size_t stride) {
  require(weights.rank() == 4 && weights.dim(2) == weights.dim(3), ErrorCode::shape_mismatch,
          "conv weights must be (F, C, k, k), got " + shape_string(weights.shape()));
  require(weights.dim(1) == in.c, ErrorCode::shape_mismatch,
          "input has " + std::to_string(in.c) + " channels, kernel expects " + std::to_string(weights.dim(1)));
  const std::size_t k = weights.dim(2);
  return {in.c, in.h, in.w, k, pad, stride, output_size(in.h, k, pad, stride), output_size(in.w, k, pad, stride)};
}

std::size_t channels_of(const Tensor& t) {
  require(t.rank() == 2 || t.rank() == 4, ErrorCode::shape_mismatch,
          "batchnorm expects (N,C) or (N,C,H,W), got " + shape_string(t.shape()));
  return t.dim(1);
}

std::size_t spatial_of(const Tensor& t) { return t.rank() == 4 ? t.dim(2) * t.dim(3) : 1; }

}  // namespace

Tensor conv_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias, std::size_t pad,
                    std::size_t stride) {
  const Nchw in = as_nchw(input, "conv_forward");
  const ConvGeometry g = conv_geometry(in, weights, pad, stride);
  const std::size_t filters = weights.dim(0);
  require(bias.size() == filters, ErrorCode::shape_mismatch, "conv bias length must equal filter count");

  Tensor out(make_shape(in, filters, g.out_h, g.out_w));
  const std::size_t in_stride = in.c * in.h * in.w;
  const std::size_t out_stride = filters * g.sites();
  const ConstMap w(weights.data(), static_cast<Eigen::Index>(filters), static_cast<Eigen::Index>(g.patch()));

  parallel_for(in.n, [&](std::size_t s) {
    std::vector<double> cols(g.patch() * g.sites());
    im2col(input.data() + s * in_stride, g, cols.data());
    const ConstMap c(cols.data(), static_cast<Eigen::Index>(g.patch()), static_cast<Eigen::Index>(g.sites()));
    MutMap o(out.data() + s * out_stride, static_cast<Eigen::Index>(filters), static_cast<Eigen::Index>(g.sites()));
    o.noalias() = w * c;
    for (std::size_t f = 0; f < filters; ++f) o.row(static_cast<Eigen::Index>(f)).array() += bias[f];
  });
  return out;
}

ConvGradients conv_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output,
                            std::size_t pad, std::size_t stride, bool need_input_grad) {
  const Nchw in = as_nchw(input, "conv_backward");
  const ConvGeometry g = conv_geometry(in, weights, pad, stride);
  const std::size_t filters = weights.dim(0);
  require(grad_output.shape() == make_shape(in, filters, g.out_h, g.out_w), ErrorCode::shape_mismatch,
          "conv grad_output shape mismatch");

  const auto F = static_cast<Eigen::Index>(filters);
  const auto K = static_cast<Eigen::Index>(g.patch());
  const auto P = static_cast<Eigen::Index>(g.sites());
  const std::size_t in_stride = in.c * in.h * in.w;
  const std::size_t out_stride = filters * g.sites();
  const ConstMap w(weights.data(), F, K);

  ConvGradients grads;
  if (need_input_grad) grads.input = Tensor(input.shape());
  // per-sample partials, reduced in sample order below
  std::vector<std::vector<double>> dw(in.n), db(in.n);

  parallel_for(in.n, [&](std::size_t s) {
    std::vector<double> cols(g.patch() * g.sites());
    im2col(input.data() + s * in_stride, g, cols.data());
    const ConstMap c(cols.data(), K, P);
    const ConstMap dy(grad_output.data() + s * out_stride, F, P);

    dw[s].resize(filters * g.patch());
    MutMap dws(dw[s].data(), F, K);
    dws.noalias() = dy * c.transpose();
    db[s].resize(filters);
    for (std::size_t f = 0; f < filters; ++f) {
      const double* row = grad_output.data() + s * out_stride + f * g.sites();
      db[s][f] = std::accumulate(row, row + g.sites(), 0.0);
    }

    if (need_input_grad) {
      MutMap dcols(cols.data(), K, P);
      dcols.noalias() = w.transpose() * dy;
      col2im(cols.data(), g, grads.input.data() + s * in_stride);
    }
  });

  grads.weights = Tensor(weights.shape());
  grads.bias.assign(filters, 0.0);
  for (std::size_t s = 0; s < in.n; ++s) {
    for (std::size_t i = 0; i < dw[s].size(); ++i) grads.weights[i] += dw[s][i];
    for (std::size_t f = 0; f < filters; ++f) grads.bias[f] += db[s][f];
  }
  return grads;
}

Tensor batchnorm_forward(const Tensor& batch, std::span<const double> scale, std::span<const double> shift,
                         double eps, Mode mode, RunningStats* stats, double momentum, BatchNormCache* cache) {
  require(eps > 0.0, ErrorCode::invalid_argument, "batchnorm epsilon must be > 0");
  const std::size_t C = channels_of(batch);
  const std::size_t N = batch.dim(0);
  const std::size_t S = spatial_of(batch);
  require(scale.size() == C && shift.size() == C, ErrorCode::shape_mismatch,
          "batchnorm scale/shift length must equal channel count");

  std::vector<double> mean(C, 0.0), var(C, 0.0);
  if (mode == Mode::train) {
    const double count = static_cast<double>(N * S);
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t c = 0; c < C; ++c) {
        const double* p = batch.data() + (n * C + c) * S;
        for (std::size_t i = 0; i < S; ++i) mean[c] += p[i];
      }
    for (auto& m : mean) m /= count;
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t c = 0; c < C; ++c) {
        const double* p = batch.data() + (n * C + c) * S;
        for (std::size_t i = 0; i < S; ++i) var[c] += (p[i] - mean[c]) * (p[i] - mean[c]);
      }
    for (auto& v : var) v /= count;
    if (stats != nullptr) {
      if (!stats->populated) {
        stats->mean = mean;
        stats->var = var;
        stats->populated = true;
      } else {
        require(stats->mean.size() == C && stats->var.size() == C, ErrorCode::shape_mismatch,
                "running statistics length mismatch");
        for (std::size_t c = 0; c < C; ++c) {
          stats->mean[c] = momentum * stats->mean[c] + (1.0 - momentum) * mean[c];
          stats->var[c] = momentum * stats->var[c] + (1.0 - momentum) * var[c];
        }
      }
    }
  } else {
    require(stats != nullptr && stats->populated, ErrorCode::precondition,
            "batchnorm inference requires populated running statistics");
    require(stats->mean.size() == C && stats->var.size() == C, ErrorCode::shape_mismatch,
            "running statistics length mismatch");
    mean = stats->mean;
    var = stats->var;
  }

  std::vector<double> inv_std(C);
  for (std::size_t c = 0; c < C; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + eps);

  Tensor out(batch.shape());
  if (cache != nullptr) {
    cache->normalized.resize(batch.size());
    cache->inv_std = inv_std;
    cache->mode = mode;
  }
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t off = (n * C + c) * S;
      for (std::size_t i = 0; i < S; ++i) {
        const double xhat = (batch[off + i] - mean[c]) * inv_std[c];
        if (cache != nullptr) cache->normalized[off + i] = xhat;
        out[off + i] = scale[c] * xhat + shift[c];
      }
    }
  return out;
}

BatchNormGradients batchnorm_backward(const BatchNormCache& cache, const Tensor& grad_output,
                                      std::span<const double> scale) {
  const std::size_t C = channels_of(grad_output);
  const std::size_t N = grad_output.dim(0);
  const std::size_t S = spatial_of(grad_output);
  require(cache.normalized.size() == grad_output.size() && cache.inv_std.size() == C, ErrorCode::shape_mismatch,
          "batchnorm cache does not match grad_output");

  BatchNormGradients g{Tensor(grad_output.shape()), std::vector<double>(C, 0.0), std::vector<double>(C, 0.0)};
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t off = (n * C + c) * S;
      for (std::size_t i = 0; i < S; ++i) {
        g.shift[c] += grad_output[off + i];
        g.scale[c] += grad_output[off + i] * cache.normalized[off + i];
      }
    }

  if (cache.mode == Mode::infer) {
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t c = 0; c < C; ++c) {
        const std::size_t off = (n * C + c) * S;
        for (std::size_t i = 0; i < S; ++i) g.input[off + i] = grad_output[off + i] * scale[c] * cache.inv_std[c];
      }
    return g;
  }

  // dx = inv_std / M * (M dxhat - sum(dxhat) - xhat * sum(dxhat * xhat)), dxhat = dy * gamma
  const double M = static_cast<double>(N * S);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c) {
      const double sum_dxhat = g.shift[c] * scale[c];
      const double sum_dxhat_xhat = g.scale[c] * scale[c];
      const std::size_t off = (n * C + c) * S;
      for (std::size_t i = 0; i < S; ++i) {
        const double dxhat = grad_output[off + i] * scale[c];
        g.input[off + i] =
            cache.inv_std[c] / M * (M * dxhat - sum_dxhat - cache.normalized[off + i] * sum_dxhat_xhat);
      }
    }
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& grad_output) {
  require(input.shape() == grad_output.shape(), ErrorCode::shape_mismatch, "relu grad shape mismatch");
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > 0.0 ? grad_output[i] : 0.0;
  return out;
}

Tensor maxpool_forward(const Tensor& input, std::size_t size, std::size_t stride, std::vector<std::size_t>* argmax) {
  const Nchw in = as_nchw(input, "maxpool_forward");
  const std::size_t oh = pooled_size(in.h, size, stride);
  const std::size_t ow = pooled_size(in.w, size, stride);
  Tensor out(make_shape(in, in.c, oh, ow));
  if (argmax != nullptr) argmax->assign(out.size(), 0);

  std::size_t o = 0;
  for (std::size_t plane = 0; plane < in.n * in.c; ++plane) {
    const std::size_t base = plane * in.h * in.w;
    for (std::size_t oy = 0; oy < oh; ++oy)
      for (std::size_t ox = 0; ox < ow; ++ox, ++o) {
        std::size_t best = base + (oy * stride) * in.w + ox * stride;
        for (std::size_t ky = 0; ky < size; ++ky)
          for (std::size_t kx = 0; kx < size; ++kx) {
            const std::size_t idx = base + (oy * stride + ky) * in.w + ox * stride + kx;
            if (input[idx] > input[best]) best = idx;
          }
        out[o] = input[best];
        if (argmax != nullptr) (*argmax)[o] = best;
      }
  }
  return out;
}

Tensor maxpool_backward(const Shape& input_shape, std::span<const std::size_t> argmax, const Tensor& grad_output) {
  require(argmax.size() == grad_output.size(), ErrorCode::shape_mismatch, "maxpool argmax/grad length mismatch");
  Tensor out(input_shape);
  for (std::size_t o = 0; o < argmax.size(); ++o) out[argmax[o]] += grad_output[o];
  return out;
}

Tensor dropout_forward(const Tensor& input, double rate, Mode mode, std::uint64_t seed, std::vector<double>* mask) {
  require(rate >= 0.0 && rate < 1.0, ErrorCode::invalid_argument, "dropout rate must be in [0, 1)");
  if (mode == Mode::infer || rate == 0.0) {
    if (mask != nullptr) mask->assign(input.size(), 1.0);
    return input;
  }
  Rng rng(seed);
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor out(input.shape());
  if (mask != nullptr) mask->resize(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double m = rng.uniform() < rate ? 0.0 : keep_scale;
    if (mask != nullptr) (*mask)[i] = m;
    out[i] = input[i] * m;
  }
  return out;
}

namespace {

struct FcGeometry {
  std::size_t batch, inputs;
};

FcGeometry fc_geometry(const Tensor& input, const Tensor& weights) {
  require(weights.rank() == 2, ErrorCode::shape_mismatch, "fc weights must be (inputs, outputs)");
  const std::size_t inputs = weights.dim(0);
  if (input.rank() <= 1) {
    require(input.size() == inputs, ErrorCode::shape_mismatch,
            "fc input length " + std::to_string(input.size()) + " != " + std::to_string(inputs));
    return {1, inputs};
  }
  const std::size_t batch = input.dim(0);
  require(input.size() == batch * inputs, ErrorCode::shape_mismatch,
          "fc flattened input length " + std::to_string(input.size() / std::max<std::size_t>(batch, 1)) +
              " != " + std::to_string(inputs));
  return {batch, inputs};
}

}  // namespace

Tensor fc_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias) {
  const FcGeometry g = fc_geometry(input, weights);
  const std::size_t outputs = weights.dim(1);
  require(bias.size() == outputs, ErrorCode::shape_mismatch, "fc bias length must equal output count");
  Tensor out(input.rank() <= 1 ? Shape{outputs} : Shape{g.batch, outputs});
  const ConstMap x(input.data(), static_cast<Eigen::Index>(g.batch), static_cast<Eigen::Index>(g.inputs));
  const ConstMap w(weights.data(), static_cast<Eigen::Index>(g.inputs), static_cast<Eigen::Index>(outputs));
  MutMap h(out.data(), static_cast<Eigen::Index>(g.batch), static_cast<Eigen::Index>(outputs));
  h.noalias() = x * w;
  for (Eigen::Index n = 0; n < h.rows(); ++n)
    for (Eigen::Index j = 0; j < h.cols(); ++j) h(n, j) += bias[static_cast<std::size_t>(j)];
  return out;
}

FcGradients fc_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_output) {
  const FcGeometry g = fc_geometry(input, weights);
  const std::size_t outputs = weights.dim(1);
  require(grad_output.size() == g.batch * outputs, ErrorCode::shape_mismatch, "fc grad_output shape mismatch");
  const auto B = static_cast<Eigen::Index>(g.batch);
  const auto D = static_cast<Eigen::Index>(g.inputs);
  const auto O = static_cast<Eigen::Index>(outputs);
  const ConstMap x(input.data(), B, D);
  const ConstMap w(weights.data(), D, O);
  const ConstMap dy(grad_output.data(), B, O);

  FcGradients grads{Tensor(input.shape()), Tensor(weights.shape()), std::vector<double>(outputs, 0.0)};
  MutMap dx(grads.input.data(), B, D);
  dx.noalias() = dy * w.transpose();
  MutMap dw(grads.weights.data(), D, O);
  dw.noalias() = x.transpose() * dy;
  for (Eigen::Index n = 0; n < B; ++n)
    for (Eigen::Index j = 0; j < O; ++j) grads.bias[static_cast<std::size_t>(j)] += dy(n, j);
  return grads;
}

std::size_t Prediction::argmax() const {
  return static_cast<std::size_t>(std::max_element(probabilities.begin(), probabilities.end()) -
                                  probabilities.begin());
}

Prediction softmax(std::span<const double> z) {
  require(!z.empty(), ErrorCode::invalid_argument, "softmax of empty vector");
  const double top = *std::max_element(z.begin(), z.end());
  Prediction p;
  p.probabilities.resize(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p.probabilities[i] = std::exp(z[i] - top);
    sum += p.probabilities[i];
  }
  for (auto& v : p.probabilities) v /= sum;
  return p;
}

Tensor softmax(const Tensor& z) {
  const std::size_t rows = z.rank() <= 1 ? 1 : z.dim(0);
  const std::size_t k = z.size() / std::max<std::size_t>(rows, 1);
  Tensor out(z.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto p = softmax(std::span<const double>(z.data() + r * k, k));
    std::copy(p.probabilities.begin(), p.probabilities.end(), out.data() + r * k);
  }
  return out;
}

Tensor softmax_backward(const Tensor& y, const Tensor& grad_y) {
  require(y.shape() == grad_y.shape(), ErrorCode::shape_mismatch, "softmax grad shape mismatch");
  const std::size_t rows = y.rank() <= 1 ? 1 : y.dim(0);
  const std::size_t k = y.size() / std::max<std::size_t>(rows, 1);
  Tensor dz(y.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* yr = y.data() + r * k;
    const double* gr = grad_y.data() + r * k;
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += gr[j] * yr[j];
    for (std::size_t j = 0; j < k; ++j) dz[r * k + j] = yr[j] * (gr[j] - dot);
  }
  return dz;
}

namespace {

constexpr double kProbabilityFloor = 1e-12;

void check_one_hot(std::span<const double> row) {
  std::size_t ones = 0;
  for (const double t : row) {
    require(t == 0.0 || t == 1.0, ErrorCode::invalid_argument, "label row is not one-hot");
    ones += t == 1.0;
  }
  require(ones == 1, ErrorCode::invalid_argument, "label row is not one-hot");
}

}  // namespace

double cross_entropy(const Tensor& probabilities, const Tensor& labels) {
  require(probabilities.shape() == labels.shape(), ErrorCode::shape_mismatch, "prediction/label shape mismatch");
  const std::size_t rows = probabilities.rank() <= 1 ? 1 : probabilities.dim(0);
  const std::size_t k = probabilities.size() / std::max<std::size_t>(rows, 1);
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    check_one_hot(labels.values().subspan(r * k, k));
    for (std::size_t j = 0; j < k; ++j)
      if (labels[r * k + j] == 1.0) loss -= std::log(std::max(probabilities[r * k + j], kProbabilityFloor));
  }
  return loss;
}

double cross_entropy(std::span<const Prediction> predictions, std::span<const std::vector<double>> labels) {
  require(predictions.size() == labels.size(), ErrorCode::shape_mismatch, "prediction/label count mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& y = predictions[i].probabilities;
    require(y.size() == labels[i].size(), ErrorCode::shape_mismatch, "prediction/label width mismatch");
    check_one_hot(labels[i]);
    for (std::size_t j = 0; j < y.size(); ++j)
      if (labels[i][j] == 1.0) loss -= std::log(std::max(y[j], kProbabilityFloor));
  }
  return loss;
}

Tensor cross_entropy_grad(const Tensor& probabilities, const Tensor& labels, double scale) {
  require(probabilities.shape() == labels.shape(), ErrorCode::shape_mismatch, "prediction/label shape mismatch");
  Tensor g(probabilities.shape());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (labels[i] != 0.0) g[i] = -scale * labels[i] / std::max(probabilities[i], kProbabilityFloor);
  return g;
}

Tensor one_hot(std::span<const std::size_t> labels, std::size_t classes) {
  Tensor t({labels.size(), classes});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] < classes, ErrorCode::invalid_argument, "label out of range");
    t[i * classes + labels[i]] = 1.0;
  }
  return t;
}

double l2_regularized_loss(double loss, std::span<const Tensor* const> weights, double lambda) {
  require(lambda >= 0.0, ErrorCode::invalid_argument, "lambda must be >= 0");
  double sq = 0.0;
  for (const Tensor* w : weights)
    for (const double v : w->values()) sq += v * v;
  return loss + lambda * 0.5 * sq;
}

void sgd_step(Tensor& parameter, const Tensor& gradient, double learning_rate) {
  require(parameter.shape() == gradient.shape(), ErrorCode::shape_mismatch,
          "parameter " + shape_string(parameter.shape()) + " vs gradient " + shape_string(gradient.shape()));
  for (std::size_t i = 0; i < parameter.size(); ++i) parameter[i] -= learning_rate * gradient[i];
}

}  // namespace eigenfeat::cnn
