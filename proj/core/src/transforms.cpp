#include "eigenfeat/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "eigenfeat/error.hpp"

namespace eigenfeat {

GrayImage zero_center_normalize(const GrayImage& img) {
  const auto px = img.pixels();
  require(px.size() >= 2, ErrorCode::invalid_argument, "normalization needs at least 2 pixels");
  const double n = static_cast<double>(px.size());
  double mean = 0.0;
  for (const double v : px) mean += v;
  mean /= n;
  double var = 0.0;
  for (const double v : px) var += (v - mean) * (v - mean);
  var /= n;
  const double sd = std::sqrt(var);
  require(sd > 0.0, ErrorCode::degenerate_input, "zero standard deviation (constant image)");

  std::vector<double> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = (px[i] - mean) / sd;
  return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage mirror_horizontal(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x) out(x, y) = img(img.width() - 1 - x, y);
  return out;
}

GrayImage flip_vertical(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y)
    for (std::size_t x = 0; x < img.width(); ++x) out(x, y) = img(x, img.height() - 1 - y);
  return out;
}

std::vector<GrayImage> augment(const GrayImage& img) {
  return {img, mirror_horizontal(img), flip_vertical(img)};
}

double quantile_lower(std::vector<double> values, double p) {
  require(!values.empty(), ErrorCode::invalid_argument, "quantile of empty set");
  require(p >= 0.0 && p <= 1.0, ErrorCode::invalid_argument, "quantile fraction outside [0,1]");
  const auto rank = static_cast<std::size_t>(std::floor(p * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank), values.end());
  return values[rank];
}

GrayImage contrast_stretch(const GrayImage& img, double lo_frac, double hi_frac, double out_max) {
  require(lo_frac >= 0.0 && hi_frac >= 0.0 && lo_frac + hi_frac < 1.0, ErrorCode::invalid_argument,
          "contrast fractions must satisfy 0 <= lo, hi and lo + hi < 1");
  const std::vector<double> values(img.pixels().begin(), img.pixels().end());
  const double lo = quantile_lower(values, lo_frac);
  const double hi = quantile_lower(values, 1.0 - hi_frac);
  if (!(hi > lo)) return GrayImage(img.width(), img.height(), 0.0);

  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v <= lo)
      out[i] = 0.0;
    else if (v >= hi)
      out[i] = out_max;
    else
      out[i] = (v - lo) / (hi - lo) * out_max;
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> sample_positions(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  for (std::size_t i = 0; i < out; ++i) {
    double src = 0.0;
    if (out == 1)
      src = static_cast<double>(in - 1) / 2.0;
    else
      src = static_cast<double>(i) * static_cast<double>(in - 1) / static_cast<double>(out - 1);
    auto lo = static_cast<std::size_t>(std::floor(src));
    if (lo >= in) lo = in - 1;
    const std::size_t hi = std::min(lo + 1, in - 1);
    taps[i] = {lo, hi, src - static_cast<double>(lo)};
  }
  return taps;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, std::size_t new_width, std::size_t new_height) {
  require(new_width >= 1 && new_height >= 1, ErrorCode::invalid_argument, "resize target must be >= 1");
  if (new_width == img.width() && new_height == img.height()) return img;

  const auto xs = sample_positions(img.width(), new_width);
  const auto ys = sample_positions(img.height(), new_height);
  const double lo_bound = min_value(img);
  const double hi_bound = max_value(img);

  std::vector<double> out(new_width * new_height);
  for (std::size_t y = 0; y < new_height; ++y) {
    const auto& ty = ys[y];
    for (std::size_t x = 0; x < new_width; ++x) {
      const auto& tx = xs[x];
      const double top = img(tx.lo, ty.lo) * (1.0 - tx.frac) + img(tx.hi, ty.lo) * tx.frac;
      const double bottom = img(tx.lo, ty.hi) * (1.0 - tx.frac) + img(tx.hi, ty.hi) * tx.frac;
      const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
      // rounding can overshoot the convex hull by an ulp
      out[y * new_width + x] = std::clamp(v, lo_bound, hi_bound);
    }
  }
  return GrayImage(new_width, new_height, std::move(out));
}

GrayImage rescale01(const GrayImage& img) {
  const double lo = min_value(img);
  const double hi = max_value(img);
  if (!(hi > lo)) return GrayImage(img.width(), img.height(), 0.0);
  std::vector<double> out(img.pixel_count());
  const double range = hi - lo;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (img.pixels()[i] - lo) / range;
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace eigenfeat
