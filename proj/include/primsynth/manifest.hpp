#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "primsynth/assembly.hpp"
#include "primsynth/config.hpp"

namespace primsynth {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kManifestFileName = "manifest.json";
inline constexpr const char* kIncompleteMarker = "INCOMPLETE";

[[nodiscard]] std::string tool_version();

struct SampleEntry {
  std::int64_t index = 0;
  std::uint64_t sample_seed = 0;
  int regeneration_attempts = 0;
  std::string s_path;  // relative to the manifest directory
  std::string m_path;
  std::vector<PlacementRecord> placements;

  [[nodiscard]] std::size_t accepted_count() const;
  /// Accepted objects per class id.
  [[nodiscard]] std::array<std::int64_t, kShapeClassCount> class_histogram() const;

  friend bool operator==(const SampleEntry&, const SampleEntry&) = default;
};

struct DatasetManifest {
  int schema_version = kManifestSchemaVersion;
  std::string tool_version;
  std::optional<std::string> created_at;
  GenConfig config;
  std::vector<SampleEntry> samples;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

[[nodiscard]] ordered_json placement_to_json(const PlacementRecord& record);
[[nodiscard]] PlacementRecord placement_from_json(const nlohmann::json& j);
[[nodiscard]] ordered_json manifest_to_json(const DatasetManifest& manifest);
[[nodiscard]] DatasetManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
/// Throws IoError when unreadable and FormatError when malformed.
[[nodiscard]] DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace primsynth
