#pragma once

#include <cstddef>
#include <vector>

#include "eigenfeat/image.hpp"

namespace eigenfeat {

/// Subtracts the mean and divides by the population standard deviation.
/// Throws degenerate_input on constant images.
GrayImage zero_center_normalize(const GrayImage& img);

GrayImage mirror_horizontal(const GrayImage& img);
GrayImage flip_vertical(const GrayImage& img);

/// {identity, horizontal mirror, vertical flip}
std::vector<GrayImage> augment(const GrayImage& img);

/// Saturates the lowest `lo_frac` and highest `hi_frac` of pixel values and
/// stretches the rest linearly onto [0, out_max]. Quantiles use sorted rank
/// with lower interpolation. For display only.
GrayImage contrast_stretch(const GrayImage& img, double lo_frac, double hi_frac, double out_max = 255.0);

/// Lower-interpolated sorted-rank quantile: sorted[floor(p * (N - 1))].
double quantile_lower(std::vector<double> values, double p);

/// Bilinear resampling with corner-aligned sample positions: output pixel i
/// samples source coordinate i * (in - 1) / (out - 1).
GrayImage resize_bilinear(const GrayImage& img, std::size_t new_width, std::size_t new_height);

/// Maps min to 0 and max to 1; a constant image maps to all zeros.
GrayImage rescale01(const GrayImage& img);

}  // namespace eigenfeat
