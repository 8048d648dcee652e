#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eigenfeat/gradient.hpp"
#include "eigenfeat/synth.hpp"

namespace eigenfeat {

struct ImageRecord {
  std::string image_id;
  std::size_t label = 0;
  double mean_intensity = 0.0;
  double mean_gradient = 0.0;
  double total_variation = 0.0;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct ClassAggregate {
  std::size_t label = 0;
  std::size_t count = 0;
  double mean_intensity = 0.0;
  double mean_intensity_std = 0.0;
  double mean_gradient = 0.0;
  double mean_gradient_std = 0.0;
  double total_variation = 0.0;
  double total_variation_std = 0.0;

  friend bool operator==(const ClassAggregate&, const ClassAggregate&) = default;
};

struct SliceStatistics {
  std::vector<ImageRecord> records;
  /// Sorted by label.
  std::vector<ClassAggregate> aggregates;

  /// Labels in descending order of mean gradient.
  std::vector<std::size_t> gradient_order() const;
};

ImageRecord image_record(const GrayImage& img, std::string image_id, std::size_t label, GradientMethod method);
/// Per-class means and sample standard deviations, records visited in order.
std::vector<ClassAggregate> aggregate(const std::vector<ImageRecord>& records);

SliceStatistics compute_statistics(const DatasetManifest& manifest, const std::filesystem::path& root,
                                   GradientMethod method);

/// CSV: image_id,class,mean_intensity,mean_grad,tv rows, then '#'-prefixed
/// aggregate lines.
std::string report_csv(const SliceStatistics& stats);
void write_report(const SliceStatistics& stats, const std::filesystem::path& path);
SliceStatistics parse_report(const std::string& csv);
SliceStatistics read_report(const std::filesystem::path& path);

}  // namespace eigenfeat
