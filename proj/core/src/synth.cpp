#include "eigenfeat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/parallel.hpp"
#include "eigenfeat/pgm.hpp"
#include "eigenfeat/rng.hpp"

namespace eigenfeat {
namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

/// Separable periodic convolution of a size x size field.
std::vector<double> smooth_periodic(const std::vector<double>& in, std::size_t size, const std::vector<double>& k) {
  const long radius = static_cast<long>(k.size() / 2);
  const long n = static_cast<long>(size);
  auto wrap = [n](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };
  std::vector<double> tmp(in.size()), out(in.size());
  for (long y = 0; y < n; ++y)
    for (long x = 0; x < n; ++x) {
      double s = 0.0;
      for (long t = -radius; t <= radius; ++t) s += k[static_cast<std::size_t>(t + radius)] * in[static_cast<std::size_t>(y) * size + wrap(x + t)];
      tmp[static_cast<std::size_t>(y) * size + static_cast<std::size_t>(x)] = s;
    }
  for (long y = 0; y < n; ++y)
    for (long x = 0; x < n; ++x) {
      double s = 0.0;
      for (long t = -radius; t <= radius; ++t) s += k[static_cast<std::size_t>(t + radius)] * tmp[wrap(y + t) * size + static_cast<std::size_t>(x)];
      out[static_cast<std::size_t>(y) * size + static_cast<std::size_t>(x)] = s;
    }
  return out;
}

void check_spec(const ClassSpec& spec) {
  require(spec.correlation_length >= 1.0, ErrorCode::invalid_argument, "correlation_length must be >= 1");
  require(spec.amplitude > 0.0, ErrorCode::invalid_argument, "amplitude must be positive");
  require(spec.base_level - 3.0 * spec.amplitude >= 0.0 && spec.base_level + 3.0 * spec.amplitude <= 255.0,
          ErrorCode::invalid_argument,
          "class " + std::to_string(spec.label) + ": base_level +- 3 amplitude leaves [0, 255]");
}

std::string image_name(std::size_t label, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "class%zu/img_%04zu.pgm", label, index);
  return buf;
}

}  // namespace

std::vector<ClassSpec> default_class_specs() {
  return {
      {1, 4.0, 20.0, 128.0},
      {2, 1.5, 30.0, 128.0},
      {3, 1.0, 40.0, 128.0},
      {4, 2.5, 25.0, 128.0},
  };
}

std::vector<std::size_t> expected_class_order() { return {3, 2, 4, 1}; }

GeneratedField gen_field_checked(const ClassSpec& spec, std::size_t size, std::uint64_t seed) {
  require(size >= 8, ErrorCode::invalid_argument, "field size must be >= 8");
  check_spec(spec);
  Rng rng(seed);
  std::vector<double> noise(size * size);
  for (auto& v : noise) v = rng.normal();
  std::vector<double> field = smooth_periodic(noise, size, gaussian_kernel(spec.correlation_length));

  double mean = 0.0;
  for (const double v : field) mean += v;
  mean /= static_cast<double>(field.size());
  double var = 0.0;
  for (const double v : field) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(field.size()));

  GeneratedField out;
  std::size_t clipped = 0;
  for (auto& v : field) {
    const double raw = std::round(spec.base_level + spec.amplitude * (v - mean) / sd);
    if (raw < 0.0 || raw > 255.0) ++clipped;
    v = std::clamp(raw, 0.0, 255.0);
  }
  out.image = GrayImage(size, size, std::move(field));
  out.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(size * size);
  return out;
}

GrayImage gen_field(const ClassSpec& spec, std::size_t size, std::uint64_t seed) {
  return gen_field_checked(spec, size, seed).image;
}

std::string manifest_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["generator_version"] = m.generator_version;
  j["seed"] = m.seed;
  if (!m.method.empty()) j["method"] = m.method;
  if (!m.source.empty()) j["source"] = m.source;
  if (m.gradient_scale) j["gradient_scale"] = *m.gradient_scale;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries)
    j["entries"].push_back({{"path", e.path}, {"label", e.label}, {"seed", e.seed}, {"split", e.split}});
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

DatasetManifest parse_manifest(const std::string& text) {
  DatasetManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.version = j.at("version").get<int>();
    m.generator_version = j.value("generator_version", "");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.method = j.value("method", "");
    m.source = j.value("source", "");
    if (j.contains("gradient_scale")) m.gradient_scale = j.at("gradient_scale").get<double>();
    for (const auto& e : j.at("entries"))
      m.entries.push_back({e.at("path").get<std::string>(), e.at("label").get<std::size_t>(),
                           e.value("seed", std::uint64_t{0}), e.value("split", "")});
    if (j.contains("warnings")) m.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::corrupt_payload, std::string("malformed manifest: ") + e.what());
  }
  require(m.version == 1, ErrorCode::version_mismatch, "manifest version " + std::to_string(m.version));
  return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  write_file(path, manifest_json(manifest));
}

DatasetManifest load_manifest(const std::filesystem::path& path) { return parse_manifest(read_file(path)); }

std::vector<std::size_t> OrderingReport::order() const {
  std::vector<std::size_t> out;
  for (const auto& c : classes) out.push_back(c.label);
  return out;
}

double pooled_standard_error(const ClassStatistic& a, const ClassStatistic& b) {
  return std::sqrt(a.stddev * a.stddev / static_cast<double>(a.count) + b.stddev * b.stddev / static_cast<double>(b.count));
}

bool OrderingReport::satisfies(const std::vector<std::size_t>& expected, double min_separation) const {
  if (order() != expected) return false;
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      if (classes[i].mean - classes[j].mean < min_separation * pooled_standard_error(classes[i], classes[j]))
        return false;
  return true;
}

OrderingReport ordering_from_values(const std::vector<std::size_t>& labels, const std::vector<double>& values,
                                    double min_separation) {
  require(labels.size() == values.size() && !labels.empty(), ErrorCode::invalid_argument,
          "ordering needs matching, non-empty label and value lists");
  std::map<std::size_t, std::vector<double>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(values[i]);
  OrderingReport report;
  for (const auto& [label, vals] : groups) {
    ClassStatistic s{label, 0.0, 0.0, vals.size()};
    for (const double v : vals) s.mean += v;
    s.mean /= static_cast<double>(vals.size());
    if (vals.size() > 1) {
      double ss = 0.0;
      for (const double v : vals) ss += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(ss / static_cast<double>(vals.size() - 1));
    }
    report.classes.push_back(s);
  }
  std::stable_sort(report.classes.begin(), report.classes.end(),
                   [](const ClassStatistic& a, const ClassStatistic& b) { return a.mean > b.mean; });
  for (std::size_t i = 0; i + 1 < report.classes.size(); ++i) {
    const auto& a = report.classes[i];
    const auto& b = report.classes[i + 1];
    if (a.mean - b.mean < min_separation * pooled_standard_error(a, b)) report.ties.push_back({a.label, b.label});
  }
  return report;
}

DatasetManifest gen_dataset(const std::vector<ClassSpec>& specs, std::size_t n_per_class, std::size_t size,
                            std::uint64_t seed, const std::filesystem::path& out_dir, double val_fraction,
                            const std::vector<std::size_t>& required_order) {
  require(n_per_class > 0, ErrorCode::invalid_argument, "n_per_class is 0: the manifest would be empty");
  require(!specs.empty(), ErrorCode::invalid_argument, "no class specs given");
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = i + 1; j < specs.size(); ++j)
      require(specs[i].label != specs[j].label, ErrorCode::invalid_argument, "class labels must be distinct");
  require(val_fraction >= 0.0 && val_fraction < 1.0, ErrorCode::invalid_argument, "val_fraction must be in [0, 1)");
  for (const auto& s : specs) check_spec(s);

  const std::size_t total = specs.size() * n_per_class;
  std::vector<GeneratedField> fields(total);
  std::vector<std::uint64_t> seeds(total);
  for (std::size_t c = 0; c < specs.size(); ++c)
    for (std::size_t i = 0; i < n_per_class; ++i) seeds[c * n_per_class + i] = derive_seed(seed, "generator", {specs[c].label, i});
  parallel_for(total, [&](std::size_t k) { fields[k] = gen_field_checked(specs[k / n_per_class], size, seeds[k]); });

  DatasetManifest manifest;
  manifest.seed = seed;
  std::vector<std::size_t> labels;
  std::vector<double> grads;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const std::size_t label = specs[c].label;
    std::vector<std::size_t> order(n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) order[i] = i;
    Rng rng(derive_seed(seed, "split", {label}));
    rng.shuffle(order);
    const auto n_val = static_cast<std::size_t>(std::lround(val_fraction * static_cast<double>(n_per_class)));
    std::vector<bool> is_val(n_per_class, false);
    for (std::size_t i = 0; i < n_val; ++i) is_val[order[i]] = true;
    for (std::size_t i = 0; i < n_per_class; ++i) {
      const auto& f = fields[c * n_per_class + i];
      const std::string path = image_name(label, i);
      manifest.entries.push_back({path, label, seeds[c * n_per_class + i], is_val[i] ? "validation" : "train"});
      if (f.clipped_fraction > 0.01) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: %.2f%% of pixels clipped", path.c_str(), 100.0 * f.clipped_fraction);
        manifest.warnings.emplace_back(buf);
      }
      labels.push_back(label);
      grads.push_back(mean_gradient_module(f.image, GradientMethod::sobel));
    }
  }

  if (!required_order.empty()) {
    const OrderingReport report = ordering_from_values(labels, grads);
    if (!report.satisfies(required_order)) {
      std::string msg = "class ordering not achieved; got";
      for (const auto& c : report.classes) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " %zu (%.4g +- %.3g)", c.label, c.mean, c.stddev);
        msg += buf;
      }
      fail(ErrorCode::ordering_failed, msg);
    }
  }

  for (std::size_t k = 0; k < total; ++k) write_pgm(fields[k].image, out_dir / manifest.entries[k].path, PgmMode::binary);
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

OrderingReport verify_ordering(const DatasetManifest& manifest, const std::filesystem::path& root,
                               GradientMethod method) {
  require(!manifest.entries.empty(), ErrorCode::invalid_argument, "manifest has no entries");
  std::vector<std::size_t> labels(manifest.entries.size());
  std::vector<double> values(manifest.entries.size());
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    labels[i] = manifest.entries[i].label;
    values[i] = mean_gradient_module(read_pgm(root / manifest.entries[i].path), method);
  });
  return ordering_from_values(labels, values);
}

}  // namespace eigenfeat
