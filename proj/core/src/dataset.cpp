#include "eigenfeat/dataset.hpp"

#include <algorithm>

#include "eigenfeat/error.hpp"
#include "eigenfeat/parallel.hpp"
#include "eigenfeat/pgm.hpp"

namespace eigenfeat {

namespace fs = std::filesystem;

DatasetManifest preprocess_dataset(const DatasetManifest& source, const fs::path& source_root, const fs::path& out_dir,
                                   GradientMethod method) {
  require(!source.entries.empty(), ErrorCode::invalid_argument, "manifest has no entries");
  const std::size_t n = source.entries.size();
  std::vector<GrayImage> magnitudes(n);
  parallel_for(n, [&](std::size_t i) {
    magnitudes[i] = gradient_magnitude(gradient(read_pgm(source_root / source.entries[i].path), method));
  });
  double peak = 0.0;
  for (const auto& m : magnitudes) peak = std::max(peak, max_value(m));
  const double scale = peak > 0.0 ? 255.0 / peak : 1.0;

  DatasetManifest out = source;
  out.method = std::string(to_string(method));
  std::error_code ec;
  const fs::path rel = fs::relative(fs::absolute(source_root) / "manifest.json", fs::absolute(out_dir), ec);
  out.source = ec ? (source_root / "manifest.json").generic_string() : rel.generic_string();
  out.gradient_scale = scale;

  for (std::size_t i = 0; i < n; ++i) {
    GrayImage& m = magnitudes[i];
    for (auto& v : m.pixels()) v *= scale;
    write_pgm(m, out_dir / source.entries[i].path, PgmMode::binary);
  }
  save_manifest(out, out_dir / "manifest.json");
  return out;
}

std::vector<cnn::Sample> load_samples(const DatasetManifest& manifest, const fs::path& root) {
  require(!manifest.entries.empty(), ErrorCode::invalid_argument, "manifest has no entries");
  std::vector<cnn::Sample> out(manifest.entries.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    require(e.label >= 1, ErrorCode::invalid_argument, "class labels start at 1 (" + e.path + ")");
    out[i].image = read_pgm(root / e.path);
    out[i].label = e.label - 1;
    out[i].group = i;
    if (e.split == "train") out[i].split = cnn::Split::train;
    if (e.split == "validation") out[i].split = cnn::Split::validation;
  });
  return out;
}

}  // namespace eigenfeat
