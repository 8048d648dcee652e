#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace eigenfeat {

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::uint32_t crc32(std::string_view bytes) noexcept;
std::string hex32(std::uint32_t value);

/// Little-endian encoder for the binary container formats.
class ByteWriter {
 public:
  void raw(std::string_view bytes) { out_.append(bytes); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void f64s(std::span<const double> values);
  /// u32 length followed by the bytes.
  void text(std::string_view s);
  /// Appends the CRC32 of everything written so far.
  void seal();

  const std::string& bytes() const noexcept { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view raw(std::size_t n);
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  void f64s(std::span<double> out);
  std::string text();

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

/// Checks and strips the trailing CRC32; throws corrupt_payload on mismatch
/// or when the buffer is too short to hold one.
std::string_view verify_sealed(std::string_view bytes);

}  // namespace eigenfeat
