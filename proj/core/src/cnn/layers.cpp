#include "eigenfeat/cnn/layers.hpp"

#include <cmath>

#include "eigenfeat/error.hpp"
#include "eigenfeat/rng.hpp"

namespace eigenfeat::cnn {
namespace {

Tensor as_vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

void require_cached(bool cached, const char* layer) {
  require(cached, ErrorCode::precondition, std::string(layer) + ": backward without cached forward state");
}

class ConvLayer final : public Layer {
 public:
  ConvLayer(const Conv& spec, const Volume& in) : spec_(spec) {
    params_.push_back({"weight", Tensor({spec.filters, in.channels, spec.kernel, spec.kernel}), {}, true, true});
    params_.push_back({"bias", Tensor({spec.filters}), {}, true, false});
  }
  LayerSpec spec() const override { return spec_; }

  Tensor forward(const Tensor& x, const ForwardContext&) override {
    input_ = x;
    cached_ = true;
    return conv_forward(x, params_[0].value, params_[1].value.values(), spec_.pad, spec_.stride);
  }

  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "conv");
    auto g = conv_backward(input_, params_[0].value, grad_output, spec_.pad, spec_.stride, input_grad_);
    params_[0].grad = std::move(g.weights);
    params_[1].grad = as_vector(std::move(g.bias));
    return std::move(g.input);
  }

 private:
  Conv spec_;
  Tensor input_;
  bool cached_ = false;
};

class BatchNormLayer final : public Layer {
 public:
  BatchNormLayer(const BatchNorm& spec, const Volume& in) : spec_(spec) {
    const std::size_t c = in.channels;
    params_.push_back({"scale", Tensor({c}, 1.0), {}, true, false});
    params_.push_back({"shift", Tensor({c}, 0.0), {}, true, false});
    params_.push_back({"running_mean", Tensor({c}, 0.0), {}, false, false});
    params_.push_back({"running_var", Tensor({c}, 1.0), {}, false, false});
  }
  LayerSpec spec() const override { return spec_; }

  Tensor forward(const Tensor& x, const ForwardContext& ctx) override {
    RunningStats stats{params_[2].value.storage(), params_[3].value.storage(), true};
    Tensor y = batchnorm_forward(x, params_[0].value.values(), params_[1].value.values(), spec_.epsilon, ctx.mode,
                                 &stats, kMomentum, &cache_);
    params_[2].value.storage() = std::move(stats.mean);
    params_[3].value.storage() = std::move(stats.var);
    cached_ = true;
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "batchnorm");
    auto g = batchnorm_backward(cache_, grad_output, params_[0].value.values());
    params_[0].grad = as_vector(std::move(g.scale));
    params_[1].grad = as_vector(std::move(g.shift));
    return std::move(g.input);
  }

 private:
  static constexpr double kMomentum = 0.9;
  BatchNorm spec_;
  BatchNormCache cache_;
  bool cached_ = false;
};

class ReluLayer final : public Layer {
 public:
  LayerSpec spec() const override { return ReLU{}; }
  Tensor forward(const Tensor& x, const ForwardContext&) override {
    input_ = x;
    cached_ = true;
    return relu(x);
  }
  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "relu");
    return relu_backward(input_, grad_output);
  }

 private:
  Tensor input_;
  bool cached_ = false;
};

class MaxPoolLayer final : public Layer {
 public:
  explicit MaxPoolLayer(const MaxPool& spec) : spec_(spec) {}
  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& x, const ForwardContext&) override {
    input_shape_ = x.shape();
    cached_ = true;
    return maxpool_forward(x, spec_.size, spec_.stride, &argmax_);
  }
  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "maxpool");
    return maxpool_backward(input_shape_, argmax_, grad_output);
  }

 private:
  MaxPool spec_;
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
  bool cached_ = false;
};

class DropoutLayer final : public Layer {
 public:
  explicit DropoutLayer(const Dropout& spec) : spec_(spec) {}
  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& x, const ForwardContext& ctx) override {
    cached_ = true;
    return dropout_forward(x, spec_.rate, ctx.mode, derive_seed(ctx.dropout_seed, "dropout", {index_}), &mask_);
  }
  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "dropout");
    require(grad_output.size() == mask_.size(), ErrorCode::shape_mismatch, "dropout grad shape mismatch");
    Tensor g(grad_output.shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = grad_output[i] * mask_[i];
    return g;
  }

 private:
  Dropout spec_;
  std::vector<double> mask_;
  bool cached_ = false;
};

class FcLayer final : public Layer {
 public:
  FcLayer(const FullyConnected& spec, const Volume& in) : spec_(spec) {
    params_.push_back({"weight", Tensor({in.size(), spec.outputs}), {}, true, true});
    params_.push_back({"bias", Tensor({spec.outputs}), {}, true, false});
  }
  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& x, const ForwardContext&) override {
    input_ = x;
    cached_ = true;
    return fc_forward(x, params_[0].value, params_[1].value.values());
  }
  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "fc");
    auto g = fc_backward(input_, params_[0].value, grad_output);
    params_[0].grad = std::move(g.weights);
    params_[1].grad = as_vector(std::move(g.bias));
    return std::move(g.input);
  }

 private:
  FullyConnected spec_;
  Tensor input_;
  bool cached_ = false;
};

class SoftmaxLayer final : public Layer {
 public:
  LayerSpec spec() const override { return Softmax{}; }
  Tensor forward(const Tensor& x, const ForwardContext&) override {
    const std::size_t n = x.rank() == 0 ? 1 : x.dim(0);
    output_ = softmax(x.reshaped({n, x.size() / n}));
    cached_ = true;
    return output_;
  }
  Tensor backward(const Tensor& grad_output) override {
    require_cached(cached_, "softmax");
    return softmax_backward(output_, grad_output.reshaped(output_.shape()));
  }

 private:
  Tensor output_;
  bool cached_ = false;
};

}  // namespace

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Volume& input) {
  if (const auto* c = std::get_if<Conv>(&spec)) return std::make_unique<ConvLayer>(*c, input);
  if (const auto* b = std::get_if<BatchNorm>(&spec)) return std::make_unique<BatchNormLayer>(*b, input);
  if (std::holds_alternative<ReLU>(spec)) return std::make_unique<ReluLayer>();
  if (const auto* p = std::get_if<MaxPool>(&spec)) return std::make_unique<MaxPoolLayer>(*p);
  if (const auto* d = std::get_if<Dropout>(&spec)) return std::make_unique<DropoutLayer>(*d);
  if (const auto* f = std::get_if<FullyConnected>(&spec)) return std::make_unique<FcLayer>(*f, input);
  return std::make_unique<SoftmaxLayer>();
}

Sequential::Sequential(Volume input, const std::vector<LayerSpec>& layers) : input_(input) {
  Volume v = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers_.push_back(make_layer(layers[i], v));
    layers_.back()->set_index(i);
    v = layer_output(layers[i], v);
  }
  if (!layers_.empty()) layers_.front()->set_input_grad(false);
}

Tensor Sequential::forward(const Tensor& batch, const ForwardContext& ctx, std::optional<std::size_t> stop) {
  require(batch.rank() == 4 && batch.dim(1) == input_.channels && batch.dim(2) == input_.height &&
              batch.dim(3) == input_.width,
          ErrorCode::shape_mismatch,
          "batch " + shape_string(batch.shape()) + " does not match network input " +
              shape_string({input_.channels, input_.height, input_.width}));
  const std::size_t last = stop.value_or(layers_.size() - 1);
  require(last < layers_.size(), ErrorCode::invalid_argument, "layer index " + std::to_string(last) + " out of range");
  Tensor x = batch;
  for (std::size_t i = 0; i <= last; ++i) x = layers_[i]->forward(x, ctx);
  return x;
}

Tensor Sequential::backward(const Tensor& grad_output) {
  Tensor g = grad_output;
  for (std::size_t i = layers_.size(); i-- > 0;) g = layers_[i]->backward(g);
  return g;
}

std::vector<Parameter*> Sequential::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_)
    for (auto& p : layer->parameters()) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> Sequential::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& layer : layers_)
    for (const auto& p : layer->parameters()) out.push_back(&p);
  return out;
}

void Sequential::initialize(std::uint64_t seed) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Rng rng(derive_seed(seed, "init", {i}));
    for (auto& p : layers_[i]->parameters()) {
      if (p.regularized) {
        // conv (F, C, k, k): fan_in = C k k; fc (D, O): fan_in = D
        const auto& s = p.value.shape();
        const std::size_t fan_in = s.size() == 4 ? s[1] * s[2] * s[3] : s[0];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (double& v : p.value.values()) v = rng.uniform(-limit, limit);
      } else if (p.name == "scale" || p.name == "running_var") {
        p.value.fill(1.0);
      } else {
        p.value.fill(0.0);
      }
      p.grad = Tensor();
    }
  }
}

void Sequential::set_input_grad(bool on) {
  if (!layers_.empty()) layers_.front()->set_input_grad(on);
}

}  // namespace eigenfeat::cnn
