#pragma once

#include <array>
#include <string>
#include <string_view>

#include "eigenfeat/image.hpp"

namespace eigenfeat {

/// 3x3 mask, coefficients z1..z9 row-major with z1 at the top-left.
struct Mask3x3 {
  std::array<double, 9> z{};

  double at(std::size_t row, std::size_t col) const { return z[row * 3 + col]; }
};

/// Horizontal (gx) and vertical (gy) derivative fields, same size as the source.
struct GradientPair {
  GrayImage gx;
  GrayImage gy;
};

enum class Boundary { replicate, zero };
enum class GradientMethod { forward, prewitt, sobel };

GradientMethod parse_gradient_method(std::string_view name);
std::string_view to_string(GradientMethod method) noexcept;

// Signs are chosen so that a field increasing to the right (or downward)
// gives a positive response under true convolution.
Mask3x3 prewitt_x();
Mask3x3 prewitt_y();
Mask3x3 sobel_x();
Mask3x3 sobel_y();

/// C(x, y) = sum_{s,t in -1..1} Z(s, t) * Y(x - s, y - t), where s is the
/// column offset and t the row offset of the mask. Out-of-range reads follow
/// the boundary policy. `threads` > 1 splits rows across workers; the result is
/// bit-identical to the serial path.
GrayImage mask_convolve(const GrayImage& img, const Mask3x3& mask, Boundary boundary = Boundary::replicate,
                        std::size_t threads = 1);

/// Forward differences; the last column/row repeats the preceding difference.
GradientPair gradient_forward(const GrayImage& img);
GradientPair gradient_prewitt(const GrayImage& img);
GradientPair gradient_sobel(const GrayImage& img);
GradientPair gradient(const GrayImage& img, GradientMethod method);

/// Pointwise sqrt(gx^2 + gy^2).
GrayImage gradient_magnitude(const GradientPair& pair);

/// Pixel sum of the gradient magnitude (discrete total variation).
double total_variation(const GrayImage& img, GradientMethod method);
double mean_gradient_module(const GrayImage& img, GradientMethod method);
double mean_intensity(const GrayImage& img);

}  // namespace eigenfeat
