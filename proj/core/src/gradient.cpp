#include "eigenfeat/gradient.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "eigenfeat/error.hpp"

namespace eigenfeat {

GradientMethod parse_gradient_method(std::string_view name) {
  if (name == "forward") return GradientMethod::forward;
  if (name == "prewitt") return GradientMethod::prewitt;
  if (name == "sobel") return GradientMethod::sobel;
  fail(ErrorCode::invalid_argument, "unknown gradient method '" + std::string(name) + "'");
}

std::string_view to_string(GradientMethod method) noexcept {
  switch (method) {
    case GradientMethod::forward: return "forward";
    case GradientMethod::prewitt: return "prewitt";
    case GradientMethod::sobel: return "sobel";
  }
  return "?";
}

Mask3x3 prewitt_x() { return {{1, 0, -1, 1, 0, -1, 1, 0, -1}}; }
Mask3x3 prewitt_y() { return {{1, 1, 1, 0, 0, 0, -1, -1, -1}}; }
Mask3x3 sobel_x() { return {{1, 0, -1, 2, 0, -2, 1, 0, -1}}; }
Mask3x3 sobel_y() { return {{1, 2, 1, 0, 0, 0, -1, -2, -1}}; }

namespace {

void convolve_rows(const GrayImage& img, const Mask3x3& mask, Boundary boundary, std::size_t y0,
                   std::size_t y1, std::vector<double>& out) {
  const auto w = static_cast<long>(img.width());
  const auto h = static_cast<long>(img.height());
  auto sample = [&](long x, long y) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) {
      if (boundary == Boundary::zero) return 0.0;
      x = std::clamp(x, 0L, w - 1);
      y = std::clamp(y, 0L, h - 1);
    }
    return img(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };
  for (std::size_t yy = y0; yy < y1; ++yy) {
    const auto y = static_cast<long>(yy);
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long t = -1; t <= 1; ++t)
        for (long s = -1; s <= 1; ++s)
          acc += mask.at(static_cast<std::size_t>(t + 1), static_cast<std::size_t>(s + 1)) *
                 sample(x - s, y - t);
      out[yy * img.width() + static_cast<std::size_t>(x)] = acc;
    }
  }
}

}  // namespace

GrayImage mask_convolve(const GrayImage& img, const Mask3x3& mask, Boundary boundary, std::size_t threads) {
  require(!img.empty(), ErrorCode::invalid_argument, "empty image");
  std::vector<double> out(img.pixel_count());
  const std::size_t rows = img.height();
  threads = std::clamp<std::size_t>(threads, 1, rows);
  if (threads == 1) {
    convolve_rows(img, mask, boundary, 0, rows, out);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (rows + threads - 1) / threads;
    for (std::size_t y0 = 0; y0 < rows; y0 += chunk)
      pool.emplace_back([&, y0] { convolve_rows(img, mask, boundary, y0, std::min(rows, y0 + chunk), out); });
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

GradientPair gradient_forward(const GrayImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  require(w >= 2 && h >= 2, ErrorCode::invalid_argument, "forward differences need at least 2x2 pixels");
  GrayImage gx(w, h);
  GrayImage gy(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t xs = x + 1 < w ? x : w - 2;
      const std::size_t ys = y + 1 < h ? y : h - 2;
      gx(x, y) = img(xs + 1, y) - img(xs, y);
      gy(x, y) = img(x, ys + 1) - img(x, ys);
    }
  return {std::move(gx), std::move(gy)};
}

GradientPair gradient_prewitt(const GrayImage& img) {
  return {mask_convolve(img, prewitt_x()), mask_convolve(img, prewitt_y())};
}

GradientPair gradient_sobel(const GrayImage& img) {
  return {mask_convolve(img, sobel_x()), mask_convolve(img, sobel_y())};
}

GradientPair gradient(const GrayImage& img, GradientMethod method) {
  switch (method) {
    case GradientMethod::forward: return gradient_forward(img);
    case GradientMethod::prewitt: return gradient_prewitt(img);
    case GradientMethod::sobel: return gradient_sobel(img);
  }
  fail(ErrorCode::invalid_argument, "unknown gradient method");
}

GrayImage gradient_magnitude(const GradientPair& pair) {
  require(pair.gx.same_size(pair.gy), ErrorCode::shape_mismatch, "gradient components differ in size");
  std::vector<double> out(pair.gx.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(pair.gx.pixels()[i], pair.gy.pixels()[i]);
  return GrayImage(pair.gx.width(), pair.gx.height(), std::move(out));
}

double total_variation(const GrayImage& img, GradientMethod method) {
  require(img.width() >= 2 && img.height() >= 2, ErrorCode::invalid_argument,
          "total variation needs at least 2x2 pixels");
  const auto mag = gradient_magnitude(gradient(img, method));
  double sum = 0.0;
  for (const double v : mag.pixels()) sum += v;
  return sum;
}

double mean_gradient_module(const GrayImage& img, GradientMethod method) {
  return total_variation(img, method) / static_cast<double>(img.pixel_count());
}

double mean_intensity(const GrayImage& img) {
  require(!img.empty(), ErrorCode::invalid_argument, "empty image");
  double sum = 0.0;
  for (const double v : img.pixels()) sum += v;
  return sum / static_cast<double>(img.pixel_count());
}

}  // namespace eigenfeat
