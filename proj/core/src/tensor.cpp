#include "eigenfeat/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "eigenfeat/error.hpp"

namespace eigenfeat {

std::size_t shape_size(const Shape& shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  require(data_.size() == shape_size(shape_), ErrorCode::shape_mismatch,
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
              shape_string(shape_));
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
  require(index.size() == shape_.size(), ErrorCode::shape_mismatch, "index rank mismatch");
  std::size_t off = 0;
  std::size_t axis = 0;
  for (const auto i : index) {
    require(i < shape_[axis], ErrorCode::shape_mismatch, "index out of range");
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

double& Tensor::at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
double Tensor::at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

Tensor Tensor::reshaped(Shape shape) const { return Tensor(std::move(shape), data_); }

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::span<double> Tensor::slice(std::size_t index) {
  require(!shape_.empty() && index < shape_[0], ErrorCode::shape_mismatch, "slice out of range");
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<double>(data_).subspan(index * stride, stride);
}

std::span<const double> Tensor::slice(std::size_t index) const {
  require(!shape_.empty() && index < shape_[0], ErrorCode::shape_mismatch, "slice out of range");
  const std::size_t stride = data_.size() / shape_[0];
  return std::span<const double>(data_).subspan(index * stride, stride);
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace eigenfeat
