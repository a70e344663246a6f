#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "primsynth/config.hpp"
#include "primsynth/manifest.hpp"

namespace primsynth {

struct DatasetStats {
  std::int64_t sample_count = 0;
  /// Classes of every drawn object, accepted or not.
  std::array<std::int64_t, kShapeClassCount> drawn_class_histogram{};
  /// Classes of objects that made it into a sample.
  std::array<std::int64_t, kShapeClassCount> class_histogram{};
  std::vector<std::int64_t> accepted_counts;
  std::vector<double> foreground_fractions;
  std::int64_t accepted_total = 0;
  std::int64_t rejected_total = 0;
  double mean_accepted_overlap = 0.0;
  int min_z_extent = 0;
  int max_z_extent = 0;
  /// Distinct (o1, o2, o3, z_c, z_max, radius_max) tuples among drawn objects, per z-rule.
  std::array<std::int64_t, kZRuleCount> distinct_profiles_per_z_rule{};
  /// Samples whose mask could not be read (excluded from foreground fractions).
  std::vector<std::int64_t> unreadable_samples;

  [[nodiscard]] double rejection_rate() const;
  /// Pearson chi-square statistic of the drawn histogram against uniform over `classes`.
  [[nodiscard]] double drawn_chi_square(const std::vector<ShapeClass>& classes) const;
};

/// Aggregates manifest records and reads every mask for its foreground fraction.
[[nodiscard]] DatasetStats dataset_stats(const std::filesystem::path& manifest_path);
[[nodiscard]] DatasetStats stats_from_manifest(const DatasetManifest& manifest, const std::filesystem::path& root,
                                               bool read_masks = true);

[[nodiscard]] ordered_json stats_to_json(const DatasetStats& stats);
[[nodiscard]] std::string stats_table(const DatasetStats& stats);

}  // namespace primsynth
