#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenfeat/gradient.hpp"
#include "eigenfeat/image.hpp"

namespace eigenfeat {

inline constexpr const char* kGeneratorVersion = "smoothed-noise-1";

struct ClassSpec {
  /// Class id, 1-based.
  std::size_t label = 1;
  /// Gaussian smoothing width in pixels.
  double correlation_length = 1.0;
  /// Standard deviation of the smoothed field in intensity units.
  double amplitude = 20.0;
  double base_level = 128.0;
};

/// Calibrated so the mean gradient module orders the classes 3 > 2 > 4 > 1.
std::vector<ClassSpec> default_class_specs();
/// Descending class order the default specs produce.
std::vector<std::size_t> expected_class_order();

struct GeneratedField {
  GrayImage image;
  /// Fraction of pixels clipped to 0 or 255.
  double clipped_fraction = 0.0;
};

/// Seeded white noise, smoothed by a periodic Gaussian of sigma =
/// correlation_length (truncated at 3 sigma), standardized, scaled by the
/// amplitude around base_level, rounded and clipped to [0, 255].
GeneratedField gen_field_checked(const ClassSpec& spec, std::size_t size, std::uint64_t seed);
GrayImage gen_field(const ClassSpec& spec, std::size_t size, std::uint64_t seed);

struct ManifestEntry {
  /// Relative to the manifest's directory.
  std::string path;
  std::size_t label = 0;
  std::uint64_t seed = 0;
  /// "train" or "validation".
  std::string split;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  int version = 1;
  std::string generator_version = kGeneratorVersion;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;
  /// Set on derived (preprocessed) manifests.
  std::string method;
  std::string source;
  /// Factor applied to |grad Y| before storage, shared by every image.
  std::optional<double> gradient_scale;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

std::string manifest_json(const DatasetManifest& manifest);
DatasetManifest parse_manifest(const std::string& json);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct ClassStatistic {
  std::size_t label = 0;
  double mean = 0.0;
  /// Sample standard deviation (n - 1).
  double stddev = 0.0;
  std::size_t count = 0;
};

struct OrderingReport {
  /// One per class in descending order of mean.
  std::vector<ClassStatistic> classes;
  /// Adjacent pairs in that order whose means differ by less than
  /// min_separation pooled standard errors.
  std::vector<std::pair<std::size_t, std::size_t>> ties;

  std::vector<std::size_t> order() const;
  /// True when the descending order equals `expected` and no pair of
  /// expected-order classes is closer than `min_separation` pooled standard errors.
  bool satisfies(const std::vector<std::size_t>& expected, double min_separation = 3.0) const;
};

double pooled_standard_error(const ClassStatistic& a, const ClassStatistic& b);

OrderingReport ordering_from_values(const std::vector<std::size_t>& labels, const std::vector<double>& values,
                                    double min_separation = 3.0);

/// Writes class<label>/img_<index>.pgm files and manifest.json under out_dir.
/// Every class puts round(val_fraction * n) images into the validation split.
/// Throws ordering_failed (before writing anything) when the mean gradient
/// module does not follow the order of `specs` sorted by expected order.
DatasetManifest gen_dataset(const std::vector<ClassSpec>& specs, std::size_t n_per_class, std::size_t size,
                            std::uint64_t seed, const std::filesystem::path& out_dir, double val_fraction = 0.3,
                            const std::vector<std::size_t>& required_order = expected_class_order());

/// Recomputes the mean gradient module of every manifest image.
OrderingReport verify_ordering(const DatasetManifest& manifest, const std::filesystem::path& root,
                               GradientMethod method = GradientMethod::sobel);

}  // namespace eigenfeat
