#include "eigenfeat/cnn/network.hpp"

#include <cmath>

#include "eigenfeat/error.hpp"
#include "eigenfeat/transforms.hpp"

namespace eigenfeat::cnn {
namespace {

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

NetworkConfig validated(NetworkConfig config) {
  validate(config);
  return config;
}

}  // namespace

bool operator==(const TrainingMetadata& a, const TrainingMetadata& b) {
  return a.seed == b.seed && a.epochs == b.epochs && a.iterations == b.iterations &&
         same_double(a.final_train_loss, b.final_train_loss) && same_double(a.final_val_loss, b.final_val_loss) &&
         same_double(a.final_val_accuracy, b.final_val_accuracy);
}

Network::Network(NetworkConfig config)
    : config_(validated(std::move(config))), stack_(config_.input, config_.layers) {
  // batchnorm defaults (unit scale, unit running variance); weights stay zero
  for (auto* p : stack_.parameters())
    if (p->name == "scale" || p->name == "running_var") p->value.fill(1.0);
}

Network::Network(const Checkpoint& ckpt) : Network(ckpt.config) {
  auto params = stack_.parameters();
  require(params.size() == ckpt.parameters.size(), ErrorCode::shape_mismatch,
          "checkpoint holds " + std::to_string(ckpt.parameters.size()) + " tensors, network expects " +
              std::to_string(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(params[i]->value.shape() == ckpt.parameters[i].shape(), ErrorCode::shape_mismatch,
            "parameter " + std::to_string(i) + " (" + params[i]->name + ") shape mismatch");
    params[i]->value = ckpt.parameters[i];
  }
}

Checkpoint Network::to_checkpoint(TrainingMetadata metadata) const {
  Checkpoint ckpt{config_, {}, metadata};
  for (const auto* p : stack_.parameters()) ckpt.parameters.push_back(p->value);
  return ckpt;
}

Tensor Network::input_tensor(const GrayImage& img) const {
  require(config_.input.channels == 1 && img.width() == config_.input.width && img.height() == config_.input.height,
          ErrorCode::shape_mismatch,
          "image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
              " does not match network input " + std::to_string(config_.input.width) + "x" +
              std::to_string(config_.input.height));
  const GrayImage src = config_.normalize_input ? zero_center_normalize(img) : img;
  return Tensor({1, img.height(), img.width()}, src.storage());
}

Tensor Network::batch_tensor(std::span<const GrayImage* const> images) const {
  const std::size_t per = config_.input.size();
  Tensor batch({images.size(), config_.input.channels, config_.input.height, config_.input.width});
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Tensor t = input_tensor(*images[i]);
    std::copy(t.values().begin(), t.values().end(), batch.data() + i * per);
  }
  return batch;
}

std::vector<Prediction> Network::predict(std::span<const GrayImage* const> images) {
  std::vector<Prediction> out;
  if (images.empty()) return out;
  const Tensor probs = stack_.forward(batch_tensor(images), ForwardContext{Mode::infer, 0});
  const std::size_t k = config_.classes;
  for (std::size_t i = 0; i < images.size(); ++i)
    out.push_back({std::vector<double>(probs.data() + i * k, probs.data() + (i + 1) * k)});
  return out;
}

Prediction Network::predict(const GrayImage& img) {
  const GrayImage* one[] = {&img};
  return predict(std::span<const GrayImage* const>(one)).front();
}

Tensor Network::activations(const GrayImage& img, std::size_t layer_index) {
  require(layer_index < config_.layers.size(), ErrorCode::invalid_argument,
          "layer index " + std::to_string(layer_index) + " out of range (network has " +
              std::to_string(config_.layers.size()) + " layers)");
  const GrayImage* one[] = {&img};
  Tensor out = stack_.forward(batch_tensor(one), ForwardContext{Mode::infer, 0}, layer_index);
  Shape shape(out.shape().begin() + 1, out.shape().end());
  return out.reshaped(std::move(shape));
}

Prediction predict(const Checkpoint& ckpt, const GrayImage& img) {
  Network net(ckpt);
  return net.predict(img);
}

Tensor activations_at(const Checkpoint& ckpt, const GrayImage& img, std::size_t layer_index) {
  Network net(ckpt);
  return net.activations(img, layer_index);
}

}  // namespace eigenfeat::cnn
