#include "eigenfeat/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/pgm.hpp"
#include "eigenfeat/transforms.hpp"

namespace eigenfeat {
namespace {

constexpr std::string_view kMagic = "FPRT";

void check_activations(const Tensor& t) {
  require(t.rank() == 3 && t.size() > 0, ErrorCode::shape_mismatch,
          "expected a (k, h, w) activation tensor, got " + shape_string(t.shape()));
}

Tensor layer_activations(cnn::Network& net, const GrayImage& img, std::size_t layer_id) {
  return net.activations(img, layer_id);
}

std::string metadata_text(const Fingerprint& fp) {
  char gap[40];
  std::snprintf(gap, sizeof gap, "%.17g", fp.spectral_gap);
  return "method " + fp.method + "\nlayer_id " + std::to_string(fp.layer_id) + "\nmodel_digest " +
         (fp.model_digest.empty() ? "-" : fp.model_digest) + "\nspectral_gap " + gap + "\n";
}

void parse_metadata(const std::string& text, Fingerprint& fp) {
  std::istringstream in(text);
  std::string key, value;
  while (in >> key >> value) {
    if (key == "method")
      fp.method = value;
    else if (key == "layer_id")
      fp.layer_id = std::stoull(value);
    else if (key == "model_digest")
      fp.model_digest = value == "-" ? "" : value;
    else if (key == "spectral_gap")
      fp.spectral_gap = std::strtod(value.c_str(), nullptr);
    else
      fail(ErrorCode::corrupt_payload, "unknown fingerprint metadata key '" + key + "'");
  }
}

}  // namespace

std::size_t strongest_channel(const Tensor& activations) {
  check_activations(activations);
  const std::size_t plane = activations.dim(1) * activations.dim(2);
  std::size_t best = 0;
  double best_value = activations[0];
  for (std::size_t i = 1; i < activations.size(); ++i)
    if (activations[i] > best_value) {
      best_value = activations[i];
      best = i;
    }
  return best / plane;
}

GrayImage channel_map(const Tensor& activations, std::size_t c) {
  check_activations(activations);
  require(c < activations.dim(0), ErrorCode::invalid_argument, "channel index out of range");
  const std::size_t h = activations.dim(1), w = activations.dim(2);
  const double* src = activations.data() + c * h * w;
  return GrayImage(w, h, std::vector<double>(src, src + h * w));
}

GrayImage alpha_map(const Tensor& activations, std::size_t width, std::size_t height) {
  return resize_bilinear(rescale01(channel_map(activations, strongest_channel(activations))), width, height);
}

GrayImage alpha_fingerprint(cnn::Network& net, const GrayImage& img, std::size_t layer_id) {
  return alpha_map(layer_activations(net, img, layer_id), img.width(), img.height());
}

GrayImage alpha_fingerprint(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id) {
  cnn::Network net(ckpt);
  return alpha_fingerprint(net, img, layer_id);
}

Matrix feature_matrix(const Tensor& activations, std::size_t width, std::size_t height) {
  check_activations(activations);
  const std::size_t m = activations.dim(0);
  Matrix x(width * height, m);
  for (std::size_t c = 0; c < m; ++c) {
    const GrayImage processed = resize_bilinear(rescale01(channel_map(activations, c)), width, height);
    std::copy(processed.storage().begin(), processed.storage().end(), x.column(c).begin());
  }
  return x;
}

Matrix assemble_feature_matrix(cnn::Network& net, const GrayImage& img, std::size_t layer_id) {
  return feature_matrix(layer_activations(net, img, layer_id), img.width(), img.height());
}

Matrix assemble_feature_matrix(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id) {
  cnn::Network net(ckpt);
  return assemble_feature_matrix(net, img, layer_id);
}

double spectral_gap(const std::vector<double>& spectrum) {
  if (spectrum.empty() || spectrum[0] <= 0.0) return 0.0;
  if (spectrum.size() == 1) return 1.0;
  return std::clamp((spectrum[0] - spectrum[1]) / spectrum[0], 0.0, 1.0);
}

Fingerprint eigen_fingerprint_from_matrix(const Matrix& x, std::size_t width, std::size_t height) {
  require(x.rows() == width * height, ErrorCode::shape_mismatch, "feature matrix rows do not match image size");
  std::vector<std::size_t> order(x.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ca = x.column(a), cb = x.column(b);
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
  Matrix sorted(x.rows(), x.cols());
  for (std::size_t j = 0; j < order.size(); ++j)
    std::copy_n(x.column(order[j]).begin(), x.rows(), sorted.column(j).begin());

  const SvdResult svd = svd_via_gram(sorted);
  Fingerprint fp;
  fp.method = "eigen";
  fp.spectrum = svd.sigma;
  fp.spectral_gap = spectral_gap(svd.sigma);
  if (svd.rank == 0) {
    fp.image = GrayImage(width, height, 0.0);
    return fp;
  }
  const auto u1 = canonical_sign(svd.u.column(0));
  fp.image = rescale01(GrayImage(width, height, u1));
  return fp;
}

Fingerprint eigen_fingerprint(cnn::Network& net, const GrayImage& img, std::size_t layer_id) {
  Fingerprint fp = eigen_fingerprint_from_matrix(assemble_feature_matrix(net, img, layer_id), img.width(), img.height());
  fp.layer_id = layer_id;
  return fp;
}

Fingerprint eigen_fingerprint(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id) {
  cnn::Network net(ckpt);
  Fingerprint fp = eigen_fingerprint(net, img, layer_id);
  fp.model_digest = ckpt.digest();
  return fp;
}

Fingerprint alpha_fingerprint_record(const cnn::Checkpoint& ckpt, const GrayImage& img, std::size_t layer_id) {
  Fingerprint fp;
  fp.method = "alpha";
  fp.image = alpha_fingerprint(ckpt, img, layer_id);
  fp.layer_id = layer_id;
  fp.model_digest = ckpt.digest();
  return fp;
}

std::string serialize_fingerprint(const Fingerprint& fp) {
  ByteWriter w;
  w.raw(kMagic);
  w.u16(kFingerprintVersion);
  w.u32(static_cast<std::uint32_t>(fp.image.width()));
  w.u32(static_cast<std::uint32_t>(fp.image.height()));
  w.u32(static_cast<std::uint32_t>(fp.spectrum.size()));
  w.f64s(fp.image.pixels());
  w.f64s(fp.spectrum);
  w.text(metadata_text(fp));
  w.seal();
  return w.bytes();
}

Fingerprint deserialize_fingerprint(std::string_view bytes) {
  require(bytes.size() >= 6 && bytes.substr(0, 4) == kMagic, ErrorCode::corrupt_payload, "not an FPRT fingerprint");
  {
    ByteReader head(bytes.substr(4, 2));
    const auto version = head.u16();
    require(version == kFingerprintVersion, ErrorCode::version_mismatch,
            "fingerprint version " + std::to_string(version) + ", expected " + std::to_string(kFingerprintVersion));
  }
  ByteReader r(verify_sealed(bytes));
  r.raw(6);
  const std::size_t width = r.u32();
  const std::size_t height = r.u32();
  const std::size_t spectrum_len = r.u32();
  require(width >= 1 && height >= 1 && width * height * 8 <= r.remaining(), ErrorCode::corrupt_payload,
          "fingerprint dimensions inconsistent with payload");
  std::vector<double> pixels(width * height);
  r.f64s(pixels);
  Fingerprint fp;
  fp.image = GrayImage(width, height, std::move(pixels));
  fp.spectrum.resize(spectrum_len);
  r.f64s(fp.spectrum);
  parse_metadata(r.text(), fp);
  require(r.remaining() == 0, ErrorCode::corrupt_payload, "trailing bytes after fingerprint metadata");
  return fp;
}

void save_fingerprint(const Fingerprint& fp, const std::filesystem::path& path) {
  write_file(path, serialize_fingerprint(fp));
}

Fingerprint load_fingerprint(const std::filesystem::path& path) { return deserialize_fingerprint(read_file(path)); }

void write_fingerprint_pgm(const Fingerprint& fp, const std::filesystem::path& path) {
  write_pgm(contrast_stretch(fp.image, 0.01, 0.01), path, PgmMode::binary);
}

double fingerprint_correlation(const GrayImage& a, const GrayImage& b) {
  require(a.same_size(b), ErrorCode::shape_mismatch, "fingerprints differ in size");
  return pearson(a.pixels(), b.pixels());
}

double robustness_compare(const cnn::Checkpoint& a, const cnn::Checkpoint& b, const GrayImage& img,
                          std::size_t layer_id) {
  const Fingerprint fa = eigen_fingerprint(a, img, layer_id);
  const Fingerprint fb = eigen_fingerprint(b, img, layer_id);
  return fingerprint_correlation(fa.image, fb.image);
}

std::map<std::size_t, double> ClassActivationSeries::class_means() const {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    acc[labels[i]].first += values[i];
    ++acc[labels[i]].second;
  }
  std::map<std::size_t, double> out;
  for (const auto& [label, sum_count] : acc) out[label] = sum_count.first / static_cast<double>(sum_count.second);
  return out;
}

std::vector<std::size_t> ClassActivationSeries::descending_order() const {
  const auto means = class_means();
  std::vector<std::size_t> order;
  for (const auto& [label, mean] : means) order.push_back(label);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means.at(a) > means.at(b); });
  return order;
}

ClassActivationSeries mean_activation_per_class(cnn::Network& net, const std::vector<const GrayImage*>& images,
                                                const std::vector<std::size_t>& labels, std::size_t layer_id,
                                                bool alpha_only) {
  require(!images.empty(), ErrorCode::invalid_argument, "mean_activation_per_class needs a non-empty dataset");
  require(images.size() == labels.size(), ErrorCode::invalid_argument, "image and label counts differ");
  require(layer_id < net.config().layers.size(), ErrorCode::invalid_argument, "layer index out of range");
  ClassActivationSeries out;
  out.labels = labels;
  constexpr std::size_t chunk = 32;
  for (std::size_t start = 0; start < images.size(); start += chunk) {
    const std::size_t end = std::min(images.size(), start + chunk);
    std::vector<const GrayImage*> part(images.begin() + start, images.begin() + end);
    const Tensor act =
        net.stack().forward(net.batch_tensor(part), cnn::ForwardContext{cnn::Mode::infer, 0}, layer_id);
    const std::size_t per = act.size() / part.size();
    for (std::size_t i = 0; i < part.size(); ++i) {
      const double* p = act.data() + i * per;
      if (alpha_only && act.rank() == 4) {
        Shape one(act.shape().begin() + 1, act.shape().end());
        const Tensor single(one, std::vector<double>(p, p + per));
        const std::size_t alpha = strongest_channel(single);
        const std::size_t plane = act.dim(2) * act.dim(3);
        out.values.push_back(std::accumulate(p + alpha * plane, p + (alpha + 1) * plane, 0.0) /
                             static_cast<double>(plane));
      } else {
        out.values.push_back(std::accumulate(p, p + per, 0.0) / static_cast<double>(per));
      }
    }
  }
  return out;
}

ModeProjection dataset_mode_projection(const std::vector<const GrayImage*>& images,
                                       const std::vector<std::size_t>& labels) {
  require(images.size() >= 2, ErrorCode::invalid_argument, "mode projection needs at least two images");
  require(images.size() == labels.size(), ErrorCode::invalid_argument, "image and label counts differ");
  for (const auto* img : images)
    require(img->same_size(*images.front()), ErrorCode::shape_mismatch, "mode projection images differ in size");
  const std::size_t n = images.front()->pixel_count();
  Matrix x(n, images.size());
  for (std::size_t j = 0; j < images.size(); ++j)
    std::copy(images[j]->storage().begin(), images[j]->storage().end(), x.column(j).begin());

  const SvdResult svd = svd_via_gram(x);
  ModeProjection out;
  out.labels = labels;
  std::vector<double> u1(svd.u.column(0).begin(), svd.u.column(0).end());
  if (svd.rank > 0) u1 = canonical_sign(u1);
  const bool has_second = svd.u.cols() > 1;
  for (std::size_t j = 0; j < images.size(); ++j) {
    auto col = x.column(j);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a += u1[i] * col[i];
      if (has_second) b += svd.u(i, 1) * col[i];
    }
    out.first.push_back(a);
    out.second.push_back(b);
  }
  out.low = *std::min_element(out.first.begin(), out.first.end());
  out.high = *std::max_element(out.first.begin(), out.first.end());
  const double width = (out.high - out.low) / static_cast<double>(out.bins);
  for (std::size_t j = 0; j < images.size(); ++j) {
    auto& hist = out.histograms[labels[j]];
    hist.resize(out.bins, 0);
    std::size_t bin = 0;
    if (width > 0.0)
      bin = std::min(out.bins - 1, static_cast<std::size_t>((out.first[j] - out.low) / width));
    ++hist[bin];
  }
  return out;
}

}  // namespace eigenfeat
