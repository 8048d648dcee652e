#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/cnn/train.hpp"
#include "eigenfeat/dataset.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/fingerprint.hpp"
#include "eigenfeat/pgm.hpp"
#include "eigenfeat/stats.hpp"
#include "eigenfeat/synth.hpp"

namespace eigenfeat::cli {

namespace fs = std::filesystem;

namespace {

/// Timestamped progress line on stderr; artifacts never carry timestamps.
void log(const std::string& message) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%H:%M:%S", std::localtime(&now));
  std::fprintf(stderr, "[%s] %s\n", stamp, message.c_str());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

DatasetManifest manifest_at(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  require(fs::exists(path), ErrorCode::missing_file, "no manifest at " + path.string());
  return load_manifest(path);
}

std::size_t fingerprint_layer(const RunConfig& cfg, const cnn::Checkpoint& ckpt) {
  return cnn::relu_layer(ckpt.config, cfg.relu);
}

/// class3/img_0007.pgm -> class3_img_0007, so images from different class
/// folders never share an output name.
std::string image_key(const fs::path& image) {
  const std::string parent = image.parent_path().filename().string();
  return parent.empty() ? image.stem().string() : parent + "_" + image.stem().string();
}

void write_fingerprint(const Fingerprint& fp, const fs::path& stem) {
  save_fingerprint(fp, fs::path(stem.string() + ".fprt"));
  write_fingerprint_pgm(fp, fs::path(stem.string() + ".pgm"));
}

}  // namespace

void cmd_gen_data(const RunConfig& cfg, const GenDataOptions&) {
  const fs::path dir = cfg.data_dir();
  log("generating " + std::to_string(cfg.classes.size()) + " x " + std::to_string(cfg.n_per_class) + " images of " +
      std::to_string(cfg.image_size) + " px");
  const DatasetManifest m =
      gen_dataset(cfg.classes, cfg.n_per_class, cfg.image_size, cfg.seed, dir, cfg.data_val_fraction);
  for (const auto& w : m.warnings) log("warning: " + w);
  std::printf("%s\n", (dir / "manifest.json").string().c_str());
}

void cmd_preprocess(const RunConfig& cfg, const PreprocessOptions& opt) {
  const fs::path src = opt.data.value_or(cfg.data_dir());
  const fs::path dst = cfg.gradient_dir();
  const DatasetManifest source = manifest_at(src);
  log("computing |grad Y| (" + std::string(to_string(cfg.method)) + ") for " + std::to_string(source.entries.size()) +
      " images");
  const DatasetManifest derived = preprocess_dataset(source, src, dst, cfg.method);
  log("global scale " + fmt(*derived.gradient_scale));
  std::printf("%s\n", (dst / "manifest.json").string().c_str());
}

void cmd_train(const RunConfig& cfg, const TrainOptions& opt) {
  const fs::path dir = opt.data.value_or(cfg.training_dir());
  const fs::path model = opt.model.value_or(cfg.default_model());
  const DatasetManifest m = manifest_at(dir);
  const auto samples = load_samples(m, dir);
  require(!samples.empty(), ErrorCode::invalid_argument, "dataset is empty");
  cnn::NetworkConfig net = cfg.network();
  if (cfg.architecture == "desk") {
    // the desk network adapts to the dataset's image size
    net.input.width = samples.front().image.width();
    net.input.height = samples.front().image.height();
    cnn::validate(net);
  }
  const cnn::TrainConfig tc = cfg.training();
  log("training " + std::string(cfg.reduced_capacity ? "reduced-capacity " : "") + cfg.architecture + " network on " +
      std::to_string(samples.size()) + " images for " + std::to_string(tc.epochs) + " epochs (batch " +
      std::to_string(tc.batch_size) + ", seed " + std::to_string(tc.seed) + ")");
  const cnn::TrainResult r = cnn::train(samples, net, tc);
  cnn::save_checkpoint(r.checkpoint, model);
  const fs::path metrics = model.parent_path() / (model.stem().string() + "_metrics.csv");
  cnn::write_metrics_csv(r.metrics, metrics);
  log("final validation accuracy " + fixed(r.final_validation.accuracy) + ", loss " + fixed(r.final_validation.loss));
  std::printf("model %s\nmetrics %s\nval_accuracy %s\n", model.string().c_str(), metrics.string().c_str(),
              fmt(r.final_validation.accuracy).c_str());
}

void cmd_fingerprint(const RunConfig& cfg, const FingerprintOptions& opt) {
  require(opt.method == "alpha" || opt.method == "eigen" || opt.method == "both", ErrorCode::invalid_argument,
          "--method must be alpha, eigen or both");
  const fs::path model = opt.model.value_or(cfg.default_model());
  require(fs::exists(model), ErrorCode::missing_file, "no checkpoint at " + model.string());
  const cnn::Checkpoint ckpt = cnn::load_checkpoint(model);
  const GrayImage img = read_pgm(opt.image);
  const std::size_t layer = fingerprint_layer(cfg, ckpt);
  const fs::path stem = cfg.out / "fingerprints" / image_key(opt.image);

  std::optional<Fingerprint> eigen, alpha;
  if (opt.method != "alpha") {
    eigen = eigen_fingerprint(ckpt, img, layer);
    write_fingerprint(*eigen, stem.string() + ".eigen");
    const auto& s = eigen->spectrum;
    std::printf("eigen %s.eigen.fprt\nspectral_gap %s\n", stem.string().c_str(), fmt(eigen->spectral_gap).c_str());
    if (s.size() >= 2 && s[1] > 0.0) std::printf("sigma_ratio %s\n", fmt(s[0] / s[1]).c_str());
  }
  if (opt.method != "eigen") {
    alpha = alpha_fingerprint_record(ckpt, img, layer);
    write_fingerprint(*alpha, stem.string() + ".alpha");
    std::printf("alpha %s.alpha.fprt\n", stem.string().c_str());
  }
  if (eigen && alpha) {
    try {
      std::printf("pearson_alpha_eigen %s\n", fmt(fingerprint_correlation(alpha->image, eigen->image)).c_str());
    } catch (const Error& e) {
      log(std::string("alpha/eigen correlation undefined: ") + e.what());
    }
  }
}

void cmd_stats(const RunConfig& cfg, const StatsOptions& opt) {
  const fs::path dir = opt.data.value_or(cfg.data_dir());
  const DatasetManifest m = manifest_at(dir);
  const SliceStatistics stats = compute_statistics(m, dir, cfg.method);
  write_report(stats, cfg.out / "stats.csv");
  std::string order;
  for (auto label : stats.gradient_order()) order += (order.empty() ? "" : " > ") + std::to_string(label);
  std::printf("report %s\ngradient_order %s\n", (cfg.out / "stats.csv").string().c_str(), order.c_str());

  if (!opt.model && !opt.modes) return;
  const fs::path gdir = opt.gradient_data.value_or(cfg.gradient_dir());
  const DatasetManifest gm = manifest_at(gdir);
  std::vector<GrayImage> images;
  std::vector<std::size_t> labels;
  for (const auto& e : gm.entries) {
    images.push_back(read_pgm(gdir / e.path));
    labels.push_back(e.label);
  }
  std::vector<const GrayImage*> ptrs;
  for (const auto& img : images) ptrs.push_back(&img);

  if (opt.model) {
    require(fs::exists(*opt.model), ErrorCode::missing_file, "no checkpoint at " + opt.model->string());
    cnn::Network net(cnn::load_checkpoint(*opt.model));
    std::string csv = "image_id,class";
    std::vector<ClassActivationSeries> series;
    for (std::size_t k = 1;; ++k) {
      std::size_t layer = 0;
      try {
        layer = cnn::relu_layer(net.config(), k);
      } catch (const Error&) {
        break;
      }
      series.push_back(mean_activation_per_class(net, ptrs, labels, layer));
      series.push_back(mean_activation_per_class(net, ptrs, labels, layer, true));
      csv += ",relu" + std::to_string(k) + "_mean,relu" + std::to_string(k) + "_alpha_mean";
    }
    csv += "\n";
    for (std::size_t i = 0; i < gm.entries.size(); ++i) {
      csv += gm.entries[i].path + "," + std::to_string(labels[i]);
      for (const auto& s : series) csv += "," + fmt(s.values[i]);
      csv += "\n";
    }
    for (std::size_t s = 0; s < series.size(); s += 2) {
      std::string o;
      for (auto label : series[s].descending_order()) o += (o.empty() ? "" : " > ") + std::to_string(label);
      csv += "# order,relu" + std::to_string(s / 2 + 1) + "," + o + "\n";
      std::printf("relu%zu_activation_order %s\n", s / 2 + 1, o.c_str());
    }
    write_file(cfg.out / "activations.csv", csv);
  }

  if (opt.modes) {
    const ModeProjection p = dataset_mode_projection(ptrs, labels);
    std::string csv = "image_id,class,mode1,mode2\n";
    for (std::size_t i = 0; i < gm.entries.size(); ++i)
      csv += gm.entries[i].path + "," + std::to_string(labels[i]) + "," + fmt(p.first[i]) + "," + fmt(p.second[i]) + "\n";
    csv += "# histogram,low," + fmt(p.low) + ",high," + fmt(p.high) + ",bins," + std::to_string(p.bins) + "\n";
    for (const auto& [label, hist] : p.histograms) {
      csv += "# histogram,class," + std::to_string(label);
      for (auto n : hist) csv += "," + std::to_string(n);
      csv += "\n";
    }
    write_file(cfg.out / "modes.csv", csv);
    std::printf("modes %s\n", (cfg.out / "modes.csv").string().c_str());
  }
}

void cmd_compare(const RunConfig& cfg, const CompareOptions& opt) {
  for (const auto* p : {&opt.model_a, &opt.model_b})
    require(fs::exists(*p), ErrorCode::missing_file, "no checkpoint at " + p->string());
  const cnn::Checkpoint a = cnn::load_checkpoint(opt.model_a);
  const cnn::Checkpoint b = cnn::load_checkpoint(opt.model_b);
  require(a.config.input == b.config.input, ErrorCode::invalid_geometry, "models expect different input geometries");
  const GrayImage img = read_pgm(opt.image);
  require(img.width() == a.config.input.width && img.height() == a.config.input.height, ErrorCode::invalid_geometry,
          "image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) + " does not match the model input " +
              std::to_string(a.config.input.width) + "x" + std::to_string(a.config.input.height));
  const Fingerprint fa = eigen_fingerprint(a, img, fingerprint_layer(cfg, a));
  const Fingerprint fb = eigen_fingerprint(b, img, fingerprint_layer(cfg, b));
  const fs::path stem = cfg.out / "compare" / image_key(opt.image);
  write_fingerprint(fa, stem.string() + ".a");
  write_fingerprint(fb, stem.string() + ".b");
  std::printf("r %s\n", fmt(fingerprint_correlation(fa.image, fb.image)).c_str());
}

}  // namespace eigenfeat::cli
