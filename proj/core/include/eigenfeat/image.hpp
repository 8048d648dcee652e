#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eigenfeat {

/// Row-major scalar intensity field. Raw inputs are nominally 0-255; derived
/// fields (gradients, normalized images) are unbounded reals.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, double fill = 0.0);
  GrayImage(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
  double operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  bool same_size(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

double min_value(const GrayImage& img);
double max_value(const GrayImage& img);

}  // namespace eigenfeat
