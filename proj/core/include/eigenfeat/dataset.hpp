#pragma once

#include <filesystem>
#include <vector>

#include "eigenfeat/cnn/train.hpp"
#include "eigenfeat/gradient.hpp"
#include "eigenfeat/synth.hpp"

namespace eigenfeat {

/// Writes |grad Y| of every manifest image under out_dir (same relative
/// paths) plus a derived manifest.json. All images share one scale factor,
/// 255 / (largest magnitude in the dataset), so relative gradient strength
/// between images survives the 8-bit storage.
DatasetManifest preprocess_dataset(const DatasetManifest& source, const std::filesystem::path& source_root,
                                   const std::filesystem::path& out_dir, GradientMethod method);

/// Training samples from a manifest: labels shifted to zero-based, one group
/// per entry, split tags carried over when present.
std::vector<cnn::Sample> load_samples(const DatasetManifest& manifest, const std::filesystem::path& root);

}  // namespace eigenfeat
