#include "eigenfeat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/parallel.hpp"
#include "eigenfeat/pgm.hpp"

namespace eigenfeat {
namespace {

constexpr std::string_view kHeader = "image_id,class,mean_intensity,mean_grad,tv";
constexpr std::string_view kAggregateHeader = "# aggregate,class,count,mean_intensity,mean_intensity_std,mean_grad,mean_grad_std,tv,tv_std";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && end == s.c_str() + s.size(), ErrorCode::corrupt_payload, "bad number '" + s + "' in report");
  return v;
}

}  // namespace

std::vector<std::size_t> SliceStatistics::gradient_order() const {
  std::vector<ClassAggregate> sorted = aggregates;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ClassAggregate& a, const ClassAggregate& b) { return a.mean_gradient > b.mean_gradient; });
  std::vector<std::size_t> out;
  for (const auto& a : sorted) out.push_back(a.label);
  return out;
}

ImageRecord image_record(const GrayImage& img, std::string image_id, std::size_t label, GradientMethod method) {
  const double tv = total_variation(img, method);
  return {std::move(image_id), label, mean_intensity(img), tv / static_cast<double>(img.pixel_count()), tv};
}

std::vector<ClassAggregate> aggregate(const std::vector<ImageRecord>& records) {
  std::map<std::size_t, std::vector<const ImageRecord*>> groups;
  for (const auto& r : records) groups[r.label].push_back(&r);
  std::vector<ClassAggregate> out;
  for (const auto& [label, rs] : groups) {
    std::vector<double> mi, mg, tv;
    for (const auto* r : rs) {
      mi.push_back(r->mean_intensity);
      mg.push_back(r->mean_gradient);
      tv.push_back(r->total_variation);
    }
    ClassAggregate a;
    a.label = label;
    a.count = rs.size();
    std::tie(a.mean_intensity, a.mean_intensity_std) = mean_std(mi);
    std::tie(a.mean_gradient, a.mean_gradient_std) = mean_std(mg);
    std::tie(a.total_variation, a.total_variation_std) = mean_std(tv);
    out.push_back(a);
  }
  return out;
}

SliceStatistics compute_statistics(const DatasetManifest& manifest, const std::filesystem::path& root,
                                   GradientMethod method) {
  SliceStatistics stats;
  stats.records.resize(manifest.entries.size());
  parallel_for(manifest.entries.size(), [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    stats.records[i] = image_record(read_pgm(root / e.path), e.path, e.label, method);
  });
  stats.aggregates = aggregate(stats.records);
  return stats;
}

std::string report_csv(const SliceStatistics& stats) {
  std::string out(kHeader);
  out += "\n";
  for (const auto& r : stats.records)
    out += r.image_id + "," + std::to_string(r.label) + "," + fmt(r.mean_intensity) + "," + fmt(r.mean_gradient) +
           "," + fmt(r.total_variation) + "\n";
  if (!stats.aggregates.empty()) {
    out += kAggregateHeader;
    out += "\n";
    for (const auto& a : stats.aggregates)
      out += "# aggregate," + std::to_string(a.label) + "," + std::to_string(a.count) + "," + fmt(a.mean_intensity) +
             "," + fmt(a.mean_intensity_std) + "," + fmt(a.mean_gradient) + "," + fmt(a.mean_gradient_std) + "," +
             fmt(a.total_variation) + "," + fmt(a.total_variation_std) + "\n";
  }
  return out;
}

void write_report(const SliceStatistics& stats, const std::filesystem::path& path) {
  write_file(path, report_csv(stats));
}

SliceStatistics parse_report(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  require(std::getline(in, line) && line == kHeader, ErrorCode::corrupt_payload, "report header missing");
  SliceStatistics stats;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# aggregate,", 0) == 0) {
      if (line == kAggregateHeader) continue;
      const auto f = split_csv(line.substr(2));
      require(f.size() == 9, ErrorCode::corrupt_payload, "bad aggregate row");
      ClassAggregate a;
      a.label = std::stoull(f[1]);
      a.count = std::stoull(f[2]);
      a.mean_intensity = parse_double(f[3]);
      a.mean_intensity_std = parse_double(f[4]);
      a.mean_gradient = parse_double(f[5]);
      a.mean_gradient_std = parse_double(f[6]);
      a.total_variation = parse_double(f[7]);
      a.total_variation_std = parse_double(f[8]);
      stats.aggregates.push_back(a);
      continue;
    }
    if (line[0] == '#') continue;
    const auto f = split_csv(line);
    require(f.size() == 5, ErrorCode::corrupt_payload, "bad record row: " + line);
    stats.records.push_back({f[0], std::stoull(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4])});
  }
  return stats;
}

SliceStatistics read_report(const std::filesystem::path& path) { return parse_report(read_file(path)); }

}  // namespace eigenfeat
