#pragma once

#include <filesystem>
#include <string>

#include "eigenfeat/image.hpp"

namespace eigenfeat {

enum class PgmMode { ascii, binary };

/// Reads a P2 or P5 file with maxval <= 255. Values are mapped onto the
/// 0-255 scale. Throws malformed_header, truncated_payload or
/// unsupported_maxval.
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

/// Writes maxval 255. Pixels are rounded to the nearest integer and must land
/// in [0, 255]; rescale first otherwise.
void write_pgm(const GrayImage& img, const std::filesystem::path& path, PgmMode mode = PgmMode::binary);
std::string encode_pgm(const GrayImage& img, PgmMode mode = PgmMode::binary);

}  // namespace eigenfeat
