#include "eigenfeat/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"

namespace eigenfeat {
namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(const std::string& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      require(value <= 1'000'000'000UL, ErrorCode::malformed_header, std::string(what) + " too large");
      ++pos_;
    }
    require(pos_ > start, ErrorCode::malformed_header, std::string("expected ") + what);
    return value;
  }

  std::size_t& pos() { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  require(bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'),
          ErrorCode::malformed_header, "missing P2/P5 magic");
  const bool binary = bytes[1] == '5';
  HeaderScanner scan(bytes);
  scan.pos() = 2;
  const auto width = scan.read_uint("width");
  const auto height = scan.read_uint("height");
  const auto maxval = scan.read_uint("maxval");
  require(width >= 1 && height >= 1, ErrorCode::malformed_header, "zero image dimension");
  require(maxval >= 1 && maxval <= 255, ErrorCode::unsupported_maxval,
          "maxval " + std::to_string(maxval) + " (only 1..255 supported)");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  const double scale = 255.0 / static_cast<double>(maxval);
  std::vector<double> data(count);

  if (binary) {
    // exactly one whitespace byte separates the header from the raster
    std::size_t& pos = scan.pos();
    require(pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])),
            ErrorCode::malformed_header, "missing separator before raster");
    ++pos;
    require(bytes.size() - pos >= count, ErrorCode::truncated_payload,
            "expected " + std::to_string(count) + " bytes, found " + std::to_string(bytes.size() - pos));
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = static_cast<unsigned char>(bytes[pos + i]);
      require(v <= maxval, ErrorCode::value_out_of_range, "sample exceeds maxval");
      data[i] = maxval == 255 ? static_cast<double>(v) : v * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      scan.skip_space_and_comments();
      require(scan.pos() < bytes.size(), ErrorCode::truncated_payload,
              "expected " + std::to_string(count) + " samples, found " + std::to_string(i));
      const auto v = scan.read_uint("sample");
      require(v <= maxval, ErrorCode::value_out_of_range, "sample exceeds maxval");
      data[i] = maxval == 255 ? static_cast<double>(v) : static_cast<double>(v) * scale;
    }
  }
  return GrayImage(width, height, std::move(data));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  return parse_pgm(read_file(path));
}

std::string encode_pgm(const GrayImage& img, PgmMode mode) {
  std::vector<unsigned char> levels(img.pixel_count());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double r = std::round(img.pixels()[i]);
    require(r >= 0.0 && r <= 255.0, ErrorCode::value_out_of_range,
            "pixel value " + std::to_string(img.pixels()[i]) + " outside [0,255] after rounding");
    levels[i] = static_cast<unsigned char>(r);
  }
  std::ostringstream out;
  out << (mode == PgmMode::binary ? "P5" : "P2") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << 255 << '\n';
  if (mode == PgmMode::binary) {
    out.write(reinterpret_cast<const char*>(levels.data()), static_cast<std::streamsize>(levels.size()));
  } else {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        if (x) out << ' ';
        out << static_cast<int>(levels[y * img.width() + x]);
      }
      out << '\n';
    }
  }
  return out.str();
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path, PgmMode mode) {
  write_file(path, encode_pgm(img, mode));
}

}  // namespace eigenfeat
