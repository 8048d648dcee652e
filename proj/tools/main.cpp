#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <random>

#include "commands.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/runtime.hpp"
#include "run_config.hpp"

using namespace eigenfeat;
using namespace eigenfeat::cli;

namespace {

enum ExitCode : int { ok = 0, unknown = 1, config = 2, data = 3, numeric = 4 };

int exit_code(const Error& e) {
  switch (e.error_class()) {
    case ErrorClass::config: return config;
    case ErrorClass::data: return data;
    case ErrorClass::numeric: return numeric;
  }
  return unknown;
}

}  // namespace

int main(int argc, char** argv) {
  configure_allocator();

  CLI::App app{"eigenfeat: CNN feature fingerprints for grayscale image datasets"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Root seed for every random stream");
  app.add_flag("--deterministic", deterministic, "Require reproducible output (the default unless the config says otherwise)");
  app.add_option("--out", out_dir, "Output directory");

  std::size_t n_per_class = 0, size = 0, epochs = 0, relu = 0;
  std::string method, data_dir, model, gradient_dir;
  bool reduced = false, raw = false, modes = false;

  auto* gen = app.add_subcommand("gen-data", "Generate the synthetic texture dataset");
  gen->add_option("--n-per-class", n_per_class, "Images per class");
  gen->add_option("--size", size, "Image side length in pixels");

  auto* pre = app.add_subcommand("preprocess", "Write gradient-magnitude images for a dataset");
  pre->add_option("--method", method, "forward, prewitt or sobel");
  pre->add_option("--data", data_dir, "Source dataset directory");

  auto* trn = app.add_subcommand("train", "Train the classifier");
  trn->add_option("--data", data_dir, "Dataset directory");
  trn->add_option("--model", model, "Checkpoint path to write");
  trn->add_option("--epochs", epochs, "Training epochs");
  trn->add_flag("--reduced-capacity", reduced, "Train the reduced-capacity variant with batch 32");
  trn->add_flag("--raw", raw, "Train on raw intensities instead of gradient magnitudes");

  FingerprintOptions fopt;
  auto* fp = app.add_subcommand("fingerprint", "Extract alpha and/or eigen fingerprints of one image");
  std::string fp_image;
  fp->add_option("--image", fp_image, "PGM image")->required()->check(CLI::ExistingFile);
  fp->add_option("--model", model, "Checkpoint");
  fp->add_option("--method", fopt.method, "alpha, eigen or both")
      ->check(CLI::IsMember({"alpha", "eigen", "both"}));
  fp->add_option("--relu", relu, "Fingerprint layer as a 1-based ReLU index");

  auto* st = app.add_subcommand("stats", "Per-image intensity and gradient statistics");
  st->add_option("--data", data_dir, "Dataset directory");
  st->add_option("--method", method, "forward, prewitt or sobel");
  st->add_option("--model", model, "Checkpoint; adds per-class activation series");
  st->add_option("--gradient-data", gradient_dir, "Preprocessed dataset used for activations and modes");
  st->add_flag("--modes", modes, "Write the first-two-mode projection of the gradient images");

  CompareOptions copt;
  auto* cmp = app.add_subcommand("compare", "Correlate eigen fingerprints of two models on one image");
  std::string model_a, model_b, cmp_image;
  cmp->add_option("--model-a", model_a, "First checkpoint")->required();
  cmp->add_option("--model-b", model_b, "Second checkpoint")->required();
  cmp->add_option("--image", cmp_image, "PGM image")->required()->check(CLI::ExistingFile);
  cmp->add_option("--relu", relu, "Fingerprint layer as a 1-based ReLU index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (deterministic) cfg.deterministic = true;
    if (!cfg.deterministic && !seed) {
      cfg.seed = std::random_device{}();
      std::fprintf(stderr, "non-deterministic run, seed %llu\n", static_cast<unsigned long long>(cfg.seed));
    }
    if (!out_dir.empty()) cfg.out = out_dir;
    if (n_per_class) cfg.n_per_class = n_per_class;
    if (size) cfg.image_size = size;
    if (!method.empty()) cfg.method = parse_gradient_method(method);
    if (epochs) cfg.train.epochs = epochs;
    if (reduced) cfg.reduced_capacity = true;
    if (raw) cfg.train_input = "raw";
    if (relu) cfg.relu = relu;
    cfg.validate();

    auto path_or = [](const std::string& s) -> std::optional<std::filesystem::path> {
      if (s.empty()) return std::nullopt;
      return std::filesystem::path(s);
    };
    if (*gen) {
      cmd_gen_data(cfg, {});
    } else if (*pre) {
      cmd_preprocess(cfg, {path_or(data_dir)});
    } else if (*trn) {
      cmd_train(cfg, {path_or(data_dir), path_or(model)});
    } else if (*fp) {
      fopt.model = path_or(model);
      fopt.image = fp_image;
      cmd_fingerprint(cfg, fopt);
    } else if (*st) {
      cmd_stats(cfg, {path_or(data_dir), path_or(model), path_or(gradient_dir), modes});
    } else if (*cmp) {
      copt.model_a = model_a;
      copt.model_b = model_b;
      copt.image = cmp_image;
      cmd_compare(cfg, copt);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return unknown;
  }
  return ok;
}
