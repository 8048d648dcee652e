#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/pgm.hpp"
#include "eigenfeat/tensor.hpp"
#include "eigenfeat/transforms.hpp"
#include "oracles.hpp"

using namespace eigenfeat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an eigenfeat::Error");
  return ErrorCode::io;
}

GrayImage image_2x2(double a, double b, double c, double d) { return GrayImage(2, 2, {a, b, c, d}); }

}  // namespace

TEST_CASE("tensor shape bookkeeping") {
  Tensor t({2, 3, 4}, 1.5);
  CHECK(t.size() == 24);
  CHECK(t.rank() == 3);
  t.at({1, 2, 3}) = 7.0;
  CHECK(t[23] == 7.0);
  CHECK(t.reshaped({6, 4})[23] == 7.0);
  CHECK(code_of([&] { (void)t.reshaped({5, 5}); }) == ErrorCode::shape_mismatch);
  CHECK(code_of([] { Tensor({2, 2}, std::vector<double>{1, 2, 3}); }) == ErrorCode::shape_mismatch);
  CHECK_FALSE(Tensor({1}, std::vector<double>{NAN}).all_finite());
}

TEST_CASE("gray image invariants") {
  CHECK(code_of([] { GrayImage(0, 3); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { GrayImage(2, 2, std::vector<double>{1, 2, 3}); }) == ErrorCode::shape_mismatch);
  CHECK(code_of([] { GrayImage(1, 1, std::vector<double>{INFINITY}); }) == ErrorCode::invalid_argument);
  GrayImage img(3, 2, {0, 1, 2, 3, 4, 5});
  CHECK(img(2, 1) == 5.0);
  CHECK(img(0, 1) == 3.0);
}

TEST_CASE("read_pgm parses ascii P2") {
  const GrayImage img = parse_pgm("P2\n2 2\n255\n0 12 255 7\n");
  CHECK(img == image_2x2(0, 12, 255, 7));
}

TEST_CASE("pgm header comments and whitespace") {
  const GrayImage img = parse_pgm("P2\n# made by hand\n2 # width\n1\n255\n3\n4\n");
  CHECK(img == GrayImage(2, 1, {3, 4}));
}

TEST_CASE("pgm binary round trip is bit exact") {
  Rng rng(11);
  GrayImage img(7, 5);
  for (auto& v : img.pixels()) v = static_cast<double>(rng.below(256));
  CHECK(parse_pgm(encode_pgm(img, PgmMode::binary)) == img);
  CHECK(parse_pgm(encode_pgm(img, PgmMode::ascii)) == img);

  const auto dir = oracle::scratch_dir("pgm");
  write_pgm(img, dir / "a.pgm", PgmMode::binary);
  CHECK(read_pgm(dir / "a.pgm") == img);
  write_pgm(img, dir / "b.pgm", PgmMode::ascii);
  CHECK(read_pgm(dir / "b.pgm") == img);
}

TEST_CASE("constant binary pgm payload") {
  const std::string bytes = encode_pgm(GrayImage(8, 8, 128.0), PgmMode::binary);
  CHECK(bytes.substr(0, 2) == "P5");
  const std::string payload = bytes.substr(bytes.size() - 64);
  CHECK(std::all_of(payload.begin(), payload.end(), [](char c) { return static_cast<unsigned char>(c) == 128; }));
  CHECK(parse_pgm(bytes) == GrayImage(8, 8, 128.0));
}

TEST_CASE("pgm error codes") {
  std::string header = "P5\n4 4\n255\n";
  CHECK(code_of([&] { parse_pgm(header + std::string(15, '\x01')); }) == ErrorCode::truncated_payload);
  CHECK(code_of([] { parse_pgm("P2\n2 2\n255\n1 2 3\n"); }) == ErrorCode::truncated_payload);
  CHECK(code_of([] { parse_pgm("P7\n2 2\n255\n"); }) == ErrorCode::malformed_header);
  CHECK(code_of([] { parse_pgm("P2\n2 x\n255\n"); }) == ErrorCode::malformed_header);
  CHECK(code_of([] { parse_pgm("P2\n1 1\n65535\n3\n"); }) == ErrorCode::unsupported_maxval);
  CHECK(code_of([] { parse_pgm("P2\n1 1\n0\n0\n"); }) == ErrorCode::unsupported_maxval);
  CHECK(code_of([] { encode_pgm(GrayImage(1, 1, 255.6)); }) == ErrorCode::value_out_of_range);
  CHECK(code_of([] { encode_pgm(GrayImage(1, 1, -0.6)); }) == ErrorCode::value_out_of_range);
  CHECK(code_of([] { read_pgm("/nonexistent/dir/x.pgm"); }) == ErrorCode::missing_file);
}

TEST_CASE("pgm with maxval below 255 is scaled") {
  const GrayImage img = parse_pgm("P2\n2 1\n15\n0 15\n");
  CHECK(img == GrayImage(2, 1, {0, 255}));
}

TEST_CASE("write_pgm rounds to nearest") {
  CHECK(parse_pgm(encode_pgm(GrayImage(2, 1, {254.6, 0.4}))) == GrayImage(2, 1, {255, 0}));
}

TEST_CASE("zero_center_normalize") {
  auto close = [](const GrayImage& a, std::vector<double> b) {
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(a.pixels()[i] == doctest::Approx(b[i]).epsilon(1e-12));
  };
  close(zero_center_normalize(GrayImage(2, 1, {0, 2})), {-1, 1});
  const double r = 2.0 / std::sqrt(8.0 / 3.0);
  close(zero_center_normalize(GrayImage(3, 1, {1, 3, 5})), {-r, 0, r});
  CHECK(code_of([] { zero_center_normalize(GrayImage(3, 3, 4.0)); }) == ErrorCode::degenerate_input);
  CHECK(code_of([] { zero_center_normalize(GrayImage(1, 1, 4.0)); }) == ErrorCode::invalid_argument);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage out = zero_center_normalize(oracle::random_image(rng, 9, 7, -1000.0, 3000.0));
    double mean = 0.0, var = 0.0;
    for (double v : out.pixels()) mean += v;
    mean /= static_cast<double>(out.pixel_count());
    for (double v : out.pixels()) var += (v - mean) * (v - mean);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(std::sqrt(var / static_cast<double>(out.pixel_count())) - 1.0) < 1e-12);
  }
}

TEST_CASE("augment produces identity, mirror and flip") {
  const auto out = augment(image_2x2(1, 2, 3, 4));
  REQUIRE(out.size() == 3);
  CHECK(out[0] == image_2x2(1, 2, 3, 4));
  CHECK(out[1] == image_2x2(2, 1, 4, 3));
  CHECK(out[2] == image_2x2(3, 4, 1, 2));

  const GrayImage sym(3, 3, {1, 2, 1, 2, 5, 2, 1, 2, 1});
  for (const auto& img : augment(sym)) CHECK(img == sym);

  Rng rng(3);
  const GrayImage r = oracle::random_image(rng, 5, 4);
  CHECK(mirror_horizontal(mirror_horizontal(r)) == r);
  CHECK(flip_vertical(flip_vertical(r)) == r);
  for (const auto& img : augment(r)) {
    auto a = img.storage(), b = r.storage();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("contrast_stretch") {
  Rng rng(8);
  const GrayImage r = oracle::random_image(rng, 6, 6, 10.0, 50.0);
  const GrayImage s = contrast_stretch(r, 0.0, 0.0);
  const double lo = min_value(r), hi = max_value(r);
  for (std::size_t i = 0; i < r.pixel_count(); ++i)
    CHECK(s.pixels()[i] == doctest::Approx(255.0 * (r.pixels()[i] - lo) / (hi - lo)).epsilon(1e-12));

  std::vector<double> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[static_cast<std::size_t>(i)] = i + 1;
  const GrayImage stretched = contrast_stretch(GrayImage(10, 10, ramp), 0.01, 0.01);
  // sorted-rank quantiles: floor(0.01 * 99) = 0 -> 1, floor(0.99 * 99) = 98 -> 99
  CHECK(stretched.pixels()[0] == 0.0);
  CHECK(stretched.pixels()[98] == 255.0);
  CHECK(stretched.pixels()[99] == 255.0);
  CHECK(stretched.pixels()[1] > 0.0);
  CHECK(stretched.pixels()[97] < 255.0);

  CHECK(contrast_stretch(GrayImage(4, 4, 9.0), 0.01, 0.01) == GrayImage(4, 4, 0.0));
  CHECK(code_of([&] { contrast_stretch(r, 0.6, 0.5); }) == ErrorCode::invalid_argument);
}

TEST_CASE("quantile_lower uses sorted rank") {
  CHECK(quantile_lower({5, 1, 4, 2, 3}, 0.0) == 1.0);
  CHECK(quantile_lower({5, 1, 4, 2, 3}, 0.5) == 3.0);
  CHECK(quantile_lower({5, 1, 4, 2, 3}, 0.99) == 4.0);
  CHECK(quantile_lower({5, 1, 4, 2, 3}, 1.0) == 5.0);
}

TEST_CASE("resize_bilinear") {
  Rng rng(2);
  const GrayImage r = oracle::random_image(rng, 5, 3);
  CHECK(resize_bilinear(r, 5, 3) == r);

  const GrayImage up = resize_bilinear(GrayImage(2, 1, {0, 10}), 3, 1);
  CHECK(up == GrayImage(3, 1, {0, 5, 10}));
  CHECK(resize_bilinear(GrayImage(4, 3, 6.5), 9, 11) == GrayImage(9, 11, 6.5));

  // exact on affine fields
  GrayImage affine(7, 5);
  for (std::size_t y = 0; y < 5; ++y)
    for (std::size_t x = 0; x < 7; ++x) affine(x, y) = 3.0 * static_cast<double>(x) - 2.0 * static_cast<double>(y) + 1.0;
  const GrayImage big = resize_bilinear(affine, 13, 9);
  for (std::size_t y = 0; y < 9; ++y)
    for (std::size_t x = 0; x < 13; ++x) {
      const double sx = static_cast<double>(x) * 6.0 / 12.0, sy = static_cast<double>(y) * 4.0 / 8.0;
      CHECK(big(x, y) == doctest::Approx(3.0 * sx - 2.0 * sy + 1.0).epsilon(1e-12));
    }

  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage src = oracle::random_image(rng, 1 + rng.below(9), 1 + rng.below(9));
    const GrayImage out = resize_bilinear(src, 1 + rng.below(20), 1 + rng.below(20));
    CHECK(min_value(out) >= min_value(src));
    CHECK(max_value(out) <= max_value(src));
  }
  CHECK(code_of([&] { resize_bilinear(r, 0, 3); }) == ErrorCode::invalid_argument);
}

TEST_CASE("rescale01") {
  CHECK(rescale01(GrayImage(3, 1, {2, 4, 6})) == GrayImage(3, 1, {0, 0.5, 1}));
  CHECK(rescale01(GrayImage(2, 2, 3.0)) == GrayImage(2, 2, 0.0));
  const GrayImage canonical(3, 1, {0, 0.25, 1});
  CHECK(rescale01(canonical) == canonical);
  Rng rng(4);
  const GrayImage once = rescale01(oracle::random_image(rng, 8, 8));
  CHECK(rescale01(once) == once);
}

TEST_CASE("crc32 and sealed containers") {
  CHECK(crc32("123456789") == 0xCBF43926u);
  ByteWriter w;
  w.u16(7);
  w.f64(-2.5);
  w.text("abc");
  w.seal();
  const std::string bytes = w.bytes();
  ByteReader r(verify_sealed(bytes));
  CHECK(r.u16() == 7);
  CHECK(r.f64() == -2.5);
  CHECK(r.text() == "abc");
  CHECK(r.remaining() == 0);

  std::string corrupted = bytes;
  corrupted[3] ^= 0x40;
  CHECK(code_of([&] { verify_sealed(corrupted); }) == ErrorCode::corrupt_payload);
  CHECK(code_of([&] { verify_sealed(bytes.substr(0, 3)); }) == ErrorCode::corrupt_payload);
  CHECK(code_of([&] {
          ByteReader short_reader(std::string_view("ab"));
          short_reader.u32();
        }) == ErrorCode::corrupt_payload);
}
