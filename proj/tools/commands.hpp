#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "run_config.hpp"

namespace eigenfeat::cli {

struct GenDataOptions {};

struct PreprocessOptions {
  std::optional<std::filesystem::path> data;
};

struct TrainOptions {
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> model;
};

struct FingerprintOptions {
  std::optional<std::filesystem::path> model;
  std::filesystem::path image;
  /// "alpha", "eigen" or "both".
  std::string method = "eigen";
};

struct StatsOptions {
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> gradient_data;
  bool modes = false;
};

struct CompareOptions {
  std::filesystem::path model_a;
  std::filesystem::path model_b;
  std::filesystem::path image;
};

void cmd_gen_data(const RunConfig& cfg, const GenDataOptions& opt);
void cmd_preprocess(const RunConfig& cfg, const PreprocessOptions& opt);
void cmd_train(const RunConfig& cfg, const TrainOptions& opt);
void cmd_fingerprint(const RunConfig& cfg, const FingerprintOptions& opt);
void cmd_stats(const RunConfig& cfg, const StatsOptions& opt);
void cmd_compare(const RunConfig& cfg, const CompareOptions& opt);

}  // namespace eigenfeat::cli
