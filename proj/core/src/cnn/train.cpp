#include "eigenfeat/cnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/rng.hpp"
#include "eigenfeat/transforms.hpp"

namespace eigenfeat::cnn {
namespace {

std::size_t argmax(const double* p, std::size_t k) { return static_cast<std::size_t>(std::max_element(p, p + k) - p); }

struct BatchScore {
  double loss_sum = 0.0;
  std::size_t correct = 0;
};

BatchScore score(const Tensor& probs, const std::vector<std::size_t>& labels) {
  const std::size_t k = probs.dim(1);
  BatchScore s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double* p = probs.data() + i * k;
    s.loss_sum -= std::log(std::max(p[labels[i]], 1e-12));
    if (argmax(p, k) == labels[i]) ++s.correct;
  }
  return s;
}

NetworkConfig with_dropout_rate(NetworkConfig net, double rate) {
  for (auto& layer : net.layers)
    if (auto* d = std::get_if<Dropout>(&layer)) d->rate = rate;
  return net;
}

void check_dataset(const std::vector<Sample>& dataset, std::size_t classes) {
  require(dataset.size() >= 2 * classes, ErrorCode::precondition,
          "training needs at least " + std::to_string(2 * classes) + " images, got " +
              std::to_string(dataset.size()));
  std::vector<std::size_t> counts(classes, 0);
  for (const auto& s : dataset) {
    require(s.label < classes, ErrorCode::invalid_argument,
            "label " + std::to_string(s.label) + " out of range for " + std::to_string(classes) + " classes");
    ++counts[s.label];
  }
  for (std::size_t c = 0; c < classes; ++c)
    require(counts[c] > 0, ErrorCode::precondition, "class " + std::to_string(c) + " has no images");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SplitIndices split_dataset(const std::vector<Sample>& dataset, double val_fraction, std::uint64_t seed) {
  require(val_fraction > 0.0 && val_fraction < 1.0, ErrorCode::invalid_argument, "val_fraction must be in (0, 1)");
  std::map<std::size_t, std::vector<std::size_t>> groups_by_class;
  for (const auto& s : dataset) {
    auto& groups = groups_by_class[s.label];
    if (std::find(groups.begin(), groups.end(), s.group) == groups.end()) groups.push_back(s.group);
  }
  std::set<std::pair<std::size_t, std::size_t>> validation_groups;
  for (auto& [label, groups] : groups_by_class) {
    std::sort(groups.begin(), groups.end());
    Rng rng(derive_seed(seed, "split", {label}));
    rng.shuffle(groups);
    auto n_val = static_cast<std::size_t>(std::lround(val_fraction * static_cast<double>(groups.size())));
    n_val = std::max<std::size_t>(n_val, 1);
    if (groups.size() >= 2) n_val = std::min(n_val, groups.size() - 1);
    for (std::size_t i = 0; i < n_val; ++i) validation_groups.insert({label, groups[i]});
  }
  SplitIndices out;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    (validation_groups.count({dataset[i].label, dataset[i].group}) ? out.validation : out.train).push_back(i);
  return out;
}

Evaluation evaluate(Network& net, const std::vector<const GrayImage*>& images, const std::vector<std::size_t>& labels,
                    std::size_t batch_size) {
  require(images.size() == labels.size() && !images.empty(), ErrorCode::invalid_argument,
          "evaluation needs matching, non-empty image and label lists");
  BatchScore total;
  for (std::size_t start = 0; start < images.size(); start += batch_size) {
    const std::size_t end = std::min(images.size(), start + batch_size);
    std::vector<const GrayImage*> chunk(images.begin() + start, images.begin() + end);
    std::vector<std::size_t> chunk_labels(labels.begin() + start, labels.begin() + end);
    const Tensor probs = net.stack().forward(net.batch_tensor(chunk), ForwardContext{Mode::infer, 0});
    const BatchScore s = score(probs, chunk_labels);
    total.loss_sum += s.loss_sum;
    total.correct += s.correct;
  }
  const double n = static_cast<double>(images.size());
  return {total.loss_sum / n * static_cast<double>(batch_size), static_cast<double>(total.correct) / n};
}

TrainResult train(const std::vector<Sample>& dataset, const NetworkConfig& net_config, const TrainConfig& cfg) {
  validate(cfg);
  validate(net_config);
  check_dataset(dataset, net_config.classes);

  SplitIndices split;
  const bool preassigned =
      std::all_of(dataset.begin(), dataset.end(), [](const Sample& s) { return s.split.has_value(); });
  if (preassigned) {
    for (std::size_t i = 0; i < dataset.size(); ++i)
      (*dataset[i].split == Split::validation ? split.validation : split.train).push_back(i);
  } else {
    split = split_dataset(dataset, cfg.val_fraction, cfg.seed);
  }
  require(!split.train.empty() && !split.validation.empty(), ErrorCode::precondition,
          "split left the training or validation set empty");

  // expanded (augmented) image sets
  std::vector<GrayImage> train_images, val_images;
  std::vector<std::size_t> train_labels, val_labels;
  auto expand = [&](const std::vector<std::size_t>& idx, std::vector<GrayImage>& imgs, std::vector<std::size_t>& labels) {
    for (const std::size_t i : idx) {
      if (cfg.augment) {
        for (auto& img : augment(dataset[i].image)) {
          imgs.push_back(std::move(img));
          labels.push_back(dataset[i].label);
        }
      } else {
        imgs.push_back(dataset[i].image);
        labels.push_back(dataset[i].label);
      }
    }
  };
  expand(split.train, train_images, train_labels);
  expand(split.validation, val_images, val_labels);
  require(cfg.batch_size <= train_images.size(), ErrorCode::precondition,
          "batch size " + std::to_string(cfg.batch_size) + " exceeds the training split (" +
              std::to_string(train_images.size()) + " images)");

  Network net(with_dropout_rate(net_config, cfg.dropout_rate));
  net.initialize(derive_seed(cfg.seed, "init"));

  const std::size_t per_sample = net.config().input.size();
  std::vector<double> train_inputs(train_images.size() * per_sample);
  for (std::size_t i = 0; i < train_images.size(); ++i) {
    const Tensor t = net.input_tensor(train_images[i]);
    std::copy(t.values().begin(), t.values().end(), train_inputs.begin() + static_cast<long>(i * per_sample));
  }
  std::vector<const GrayImage*> val_ptrs;
  for (const auto& img : val_images) val_ptrs.push_back(&img);

  const std::size_t classes = net.config().classes;
  const std::size_t b = cfg.batch_size;
  const std::size_t iters_per_epoch = train_images.size() / b;
  const Volume in = net.config().input;

  TrainResult result;
  result.validation_indices = split.validation;
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
  Rng val_rng(derive_seed(cfg.seed, "valshuffle"));
  std::vector<std::size_t> order(train_images.size());
  std::vector<std::size_t> val_order(val_images.size());
  for (std::size_t i = 0; i < val_order.size(); ++i) val_order[i] = i;
  auto params = net.parameters();
  std::size_t iteration = 0;
  double last_loss = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_rng.shuffle(order);
    for (std::size_t it = 0; it < iters_per_epoch; ++it) {
      ++iteration;
      Tensor batch({b, in.channels, in.height, in.width});
      std::vector<std::size_t> labels(b);
      for (std::size_t j = 0; j < b; ++j) {
        const std::size_t s = order[it * b + j];
        std::copy_n(train_inputs.data() + s * per_sample, per_sample, batch.data() + j * per_sample);
        labels[j] = train_labels[s];
      }
      const Tensor probs = net.stack().forward(batch, ForwardContext{Mode::train, derive_seed(cfg.seed, "dropout", {iteration})});
      const BatchScore sc = score(probs, labels);
      const Tensor targets = one_hot(labels, classes);
      net.stack().backward(cross_entropy_grad(probs, targets, 1.0 / static_cast<double>(b)));
      for (auto* p : params) {
        if (!p->trainable) continue;
        if (p->regularized && cfg.l2_lambda > 0.0)
          for (std::size_t k = 0; k < p->grad.size(); ++k) p->grad[k] += cfg.l2_lambda * p->value[k];
        sgd_step(p->value, p->grad, cfg.learning_rate);
      }
      require(std::isfinite(sc.loss_sum) && probs.all_finite(), ErrorCode::non_convergence,
              "training loss became non-finite at iteration " + std::to_string(iteration));
      last_loss = sc.loss_sum;

      MetricRow row{iteration, epoch, sc.loss_sum, static_cast<double>(sc.correct) / static_cast<double>(b), {}, {}};
      if (cfg.val_frequency > 0 && iteration % cfg.val_frequency == 0) {
        val_rng.shuffle(val_order);
        const std::size_t m = std::min(b, val_order.size());
        std::vector<const GrayImage*> imgs;
        std::vector<std::size_t> lbls;
        for (std::size_t j = 0; j < m; ++j) {
          imgs.push_back(val_ptrs[val_order[j]]);
          lbls.push_back(val_labels[val_order[j]]);
        }
        const Evaluation e = evaluate(net, imgs, lbls, b);
        row.val_loss = e.loss;
        row.val_accuracy = e.accuracy;
      }
      result.metrics.push_back(row);
    }
  }

  result.final_validation = evaluate(net, val_ptrs, val_labels, b);
  TrainingMetadata meta;
  meta.seed = cfg.seed;
  meta.epochs = cfg.epochs;
  meta.iterations = iteration;
  meta.final_train_loss = last_loss;
  meta.final_val_loss = result.final_validation.loss;
  meta.final_val_accuracy = result.final_validation.accuracy;
  result.checkpoint = net.to_checkpoint(meta);
  return result;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
  std::string out =
      "# train_loss: cross-entropy summed over the minibatch; gradients use the per-sample mean plus L2\n"
      "# val_loss: mean per-sample cross-entropy on a shuffled validation minibatch, scaled by the batch size\n"
      "iteration,epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.epoch) + "," + fmt(r.train_loss) + "," +
           fmt(r.train_accuracy) + "," + (r.val_loss ? fmt(*r.val_loss) : "") + "," +
           (r.val_accuracy ? fmt(*r.val_accuracy) : "") + "\n";
  }
  return out;
}

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path) {
  write_file(path, metrics_csv(rows));
}

}  // namespace eigenfeat::cnn
