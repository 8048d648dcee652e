#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/image.hpp"
#include "eigenfeat/svd.hpp"
#include "eigenfeat/tensor.hpp"

namespace eigenfeat {

/// Index of the channel holding the global maximum of a (k, h, w) tensor;
/// ties go to the lowest channel.
std::size_t strongest_channel(const Tensor& activations);

/// Channel c of a (k, h, w) tensor as an image.
GrayImage channel_map(const Tensor& activations, std::size_t c);

/// Strongest channel rescaled to [0, 1] and resized to width x height.
GrayImage alpha_map(const Tensor& activations, std::size_t width, std::size_t height);
GrayImage alpha_fingerprint(cnn::Network& net, const GrayImage& img, std::size_t layer_id);
GrayImage alpha_fingerprint(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id);

/// One column per channel: map rescaled to [0, 1], resized to width x height,
/// flattened row-major.
Matrix feature_matrix(const Tensor& activations, std::size_t width, std::size_t height);
Matrix assemble_feature_matrix(cnn::Network& net, const GrayImage& img, std::size_t layer_id);
Matrix assemble_feature_matrix(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id);

struct Fingerprint {
  /// "eigen" or "alpha".
  std::string method = "eigen";
  /// Values in [0, 1].
  GrayImage image;
  /// Descending singular values of the feature matrix (empty for alpha).
  std::vector<double> spectrum;
  std::size_t layer_id = 0;
  std::string model_digest;
  /// (sigma_1 - sigma_2) / sigma_1; 1 with a single column, 0 for a zero matrix.
  double spectral_gap = 0.0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

double spectral_gap(const std::vector<double>& spectrum);

/// u_1 of the feature matrix, sign-canonicalized and rescaled to [0, 1].
/// Columns are put in lexicographic order first, so the result does not
/// depend on channel order.
Fingerprint eigen_fingerprint_from_matrix(const Matrix& x, std::size_t width, std::size_t height);
Fingerprint eigen_fingerprint(cnn::Network& net, const GrayImage& img, std::size_t layer_id);
Fingerprint eigen_fingerprint(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id);
Fingerprint alpha_fingerprint_record(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id);

inline constexpr std::uint16_t kFingerprintVersion = 1;

/// "FPRT", u16 version, u32 width, u32 height, u32 spectrum length, image and
/// spectrum as f64 LE, metadata text, CRC32.
std::string serialize_fingerprint(const Fingerprint& fp);
Fingerprint deserialize_fingerprint(std::string_view bytes);
void save_fingerprint(const Fingerprint& fp, const std::filesystem::path& path);
Fingerprint load_fingerprint(const std::filesystem::path& path);
/// 1%/1% contrast-stretched binary PGM of the fingerprint image.
void write_fingerprint_pgm(const Fingerprint& fp, const std::filesystem::path& path);

/// Pearson correlation of two equal-size fingerprint images.
double fingerprint_correlation(const GrayImage& a, const GrayImage& b);
/// Correlation of the eigen fingerprints of `img` under two models.
double robustness_compare(const cnn::Checkpoint& a, const cnn::Checkpoint& b, const GrayImage& img,
                          std::size_t layer_id);

struct ClassActivationSeries {
  std::vector<std::size_t> labels;
  /// Per-image mean activation, parallel to labels.
  std::vector<double> values;

  std::map<std::size_t, double> class_means() const;
  /// Labels sorted by descending class mean.
  std::vector<std::size_t> descending_order() const;
};

/// Mean over all channels and pixels of the layer output per image, or over
/// the strongest channel only when alpha_only is set.
ClassActivationSeries mean_activation_per_class(cnn::Network& net, const std::vector<const GrayImage*>& images,
                                                const std::vector<std::size_t>& labels, std::size_t layer_id,
                                                bool alpha_only = false);

struct ModeProjection {
  std::vector<std::size_t> labels;
  /// Loadings on the first and second left singular vectors, one per image.
  std::vector<double> first;
  std::vector<double> second;
  /// Histogram range and per-class counts over the first-mode loadings.
  double low = 0.0;
  double high = 0.0;
  std::size_t bins = 32;
  std::map<std::size_t, std::vector<std::size_t>> histograms;
};

/// Flattened images as columns, projected onto the first two modes (u_1 sign
/// canonical).
ModeProjection dataset_mode_projection(const std::vector<const GrayImage*>& images,
                                       const std::vector<std::size_t>& labels);

}  // namespace eigenfeat
