#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eigenfeat/cnn/config.hpp"
#include "eigenfeat/gradient.hpp"
#include "eigenfeat/synth.hpp"

namespace eigenfeat::cli {

/// Everything a pipeline run needs. Loaded from JSON; command line flags
/// override individual fields afterwards.
struct RunConfig {
  std::uint64_t seed = 1;
  bool deterministic = true;
  std::filesystem::path out = "eigenfeat_run";

  // data generation
  std::size_t n_per_class = 100;
  std::size_t image_size = 64;
  double data_val_fraction = 0.3;
  std::vector<ClassSpec> classes = default_class_specs();

  GradientMethod method = GradientMethod::sobel;

  // network
  /// "desk" or "full".
  std::string architecture = "desk";
  bool reduced_capacity = false;
  bool normalize_input = true;

  cnn::TrainConfig train;
  /// "gradient" trains on the preprocessed |grad Y| set, "raw" on the intensities.
  std::string train_input = "gradient";

  /// Fingerprint layer as a 1-based ReLU index.
  std::size_t relu = 2;

  std::filesystem::path data_dir() const { return out / "data"; }
  std::filesystem::path gradient_dir() const { return out / "gradient"; }
  std::filesystem::path training_dir() const { return train_input == "raw" ? data_dir() : gradient_dir(); }
  std::filesystem::path default_model() const { return out / (reduced_capacity ? "model_reduced.mcnn" : "model.mcnn"); }

  /// Architecture after the reduced-capacity switch is applied.
  cnn::NetworkConfig network() const;
  /// Train settings with the reduced-capacity batch size applied.
  cnn::TrainConfig training() const;

  void validate() const;
};

RunConfig parse_run_config(const std::string& json);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_json(const RunConfig& cfg);

}  // namespace eigenfeat::cli
