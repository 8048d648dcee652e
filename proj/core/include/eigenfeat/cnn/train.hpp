#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eigenfeat/cnn/config.hpp"
#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/image.hpp"

namespace eigenfeat::cnn {

enum class Split { train, validation };

struct Sample {
  GrayImage image;
  /// Zero-based class index.
  std::size_t label = 0;
  /// Source-image id; samples sharing a group always land in the same split.
  std::size_t group = 0;
  /// Preassigned split; when every sample carries one the random split is skipped.
  std::optional<Split> split;
};

struct MetricRow {
  std::size_t iteration = 0;
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> val_loss;
  std::optional<double> val_accuracy;
};

struct Evaluation {
  /// Mean per-sample cross-entropy times the batch size (batch-sum units).
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<MetricRow> metrics;
  /// Indices into the dataset that formed the validation split.
  std::vector<std::size_t> validation_indices;
  /// Full validation split evaluated with the final parameters.
  Evaluation final_validation;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Class-stratified split at the group level: within each class,
/// round(val_fraction * groups) groups (at least one, and at least one left
/// for training when a class has two or more groups) go to validation.
SplitIndices split_dataset(const std::vector<Sample>& dataset, double val_fraction, std::uint64_t seed);

/// Minibatch SGD on J = CE/B + lambda/2 * sum(w^2). Logged training loss is
/// the batch sum of cross-entropy; validation runs every val_frequency
/// iterations on a freshly shuffled validation minibatch.
TrainResult train(const std::vector<Sample>& dataset, const NetworkConfig& net, const TrainConfig& cfg);

Evaluation evaluate(Network& net, const std::vector<const GrayImage*>& images, const std::vector<std::size_t>& labels,
                    std::size_t batch_size);

std::string metrics_csv(const std::vector<MetricRow>& rows);
void write_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path);

}  // namespace eigenfeat::cnn
