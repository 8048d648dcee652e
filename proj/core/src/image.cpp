#include "eigenfeat/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eigenfeat/error.hpp"

namespace eigenfeat {

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {
  require(width >= 1 && height >= 1, ErrorCode::invalid_argument, "image dimensions must be >= 1");
  require(std::isfinite(fill), ErrorCode::invalid_argument, "non-finite fill value");
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require(width >= 1 && height >= 1, ErrorCode::invalid_argument, "image dimensions must be >= 1");
  require(data_.size() == width * height, ErrorCode::shape_mismatch,
          "image data length " + std::to_string(data_.size()) + " != " + std::to_string(width) + "x" +
              std::to_string(height));
  require(std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }),
          ErrorCode::invalid_argument, "non-finite pixel value");
}

double min_value(const GrayImage& img) {
  require(!img.empty(), ErrorCode::invalid_argument, "empty image");
  return *std::min_element(img.pixels().begin(), img.pixels().end());
}

double max_value(const GrayImage& img) {
  require(!img.empty(), ErrorCode::invalid_argument, "empty image");
  return *std::max_element(img.pixels().begin(), img.pixels().end());
}

}  // namespace eigenfeat
