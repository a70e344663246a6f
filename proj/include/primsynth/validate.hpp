#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "primsynth/manifest.hpp"

namespace primsynth {

enum class Check {
  Files,          // both volumes exist, parse, match grid dims and datatypes
  ValueDomain,    // S in {0, intensity}; m within the label mode's range
  Records,        // placement records agree with objects rebuilt from the sample seed
  Order,          // placements are volume non-increasing
  OverlapAudit,   // replayed accepted placements stay under the threshold
  ShellMask,      // S is exactly the union of placed shells and lies inside the mask
  Overwrite,      // every m voxel carries the label of its last covering object
  Determinism,    // spot-checked samples regenerate byte-identically
};
inline constexpr std::size_t kCheckCount = 8;

[[nodiscard]] std::string_view check_name(Check check);

struct CheckResult {
  enum class Status { Pass, Fail, Skipped };
  Status status = Status::Skipped;
  std::string detail;
};

struct SampleReport {
  std::int64_t index = 0;
  std::array<CheckResult, kCheckCount> checks{};

  [[nodiscard]] const CheckResult& operator[](Check c) const { return checks[static_cast<std::size_t>(c)]; }
  [[nodiscard]] CheckResult& operator[](Check c) { return checks[static_cast<std::size_t>(c)]; }
  [[nodiscard]] bool passed() const;
};

struct ValidationReport {
  std::vector<std::string> dataset_errors;
  std::vector<SampleReport> samples;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::size_t failed_samples() const;
  /// Failure count per check across samples.
  [[nodiscard]] std::array<std::size_t, kCheckCount> failure_counts() const;
  [[nodiscard]] std::string summary() const;
};

struct ValidationOptions {
  /// Fraction of samples regenerated from their seeds and byte-compared.
  double spot_check_fraction = 0.1;
};

/// Checks one sample against its manifest entry. Never throws for file or
/// content problems; they are reported as failed checks.
[[nodiscard]] SampleReport validate_sample(const DatasetManifest& manifest, const SampleEntry& entry,
                                           const std::filesystem::path& root, bool spot_check);

/// Throws IoError/FormatError only when the manifest itself cannot be read.
[[nodiscard]] ValidationReport validate_dataset(const std::filesystem::path& manifest_path,
                                                const ValidationOptions& options = {});

/// Whether sample `index` is part of the determinism spot check.
[[nodiscard]] bool is_spot_checked(std::int64_t index, double fraction);

}  // namespace primsynth
