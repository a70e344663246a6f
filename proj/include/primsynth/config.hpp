#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "primsynth/grid.hpp"
#include "primsynth/shape_class.hpp"

namespace primsynth {

enum class LabelMode { Binary, ShapeClass, Instance };
enum class VolumeFormat { Nifti, Raw };

[[nodiscard]] std::string_view label_mode_name(LabelMode mode);
[[nodiscard]] LabelMode parse_label_mode(std::string_view name);
[[nodiscard]] std::string_view volume_format_name(VolumeFormat format);
[[nodiscard]] VolumeFormat parse_volume_format(std::string_view name);

/// Every knob of a generation run. Defaults give the full 32-class,
/// instance-augmented, overlapping configuration at 96^3.
struct GenConfig {
  Dims grid{96, 96, 96};
  int m_objects = 15;
  /// When greater than m_objects, each sample draws M uniformly from [m_objects, m_objects_max].
  int m_objects_max = 0;
  double overlap_threshold = 0.25;
  int max_iter = 100;
  int intensity = 128;
  LabelMode label_mode = LabelMode::ShapeClass;
  bool ia_enabled = true;
  bool overlap_enabled = true;
  bool planar_mode = false;
  std::vector<XyRule> allowed_xy = all_xy_rules();
  std::vector<ZRule> allowed_z = all_z_rules();
  std::int64_t n_samples = 100;
  std::uint64_t master_seed = 0;
  VolumeFormat output_format = VolumeFormat::Nifti;

  static std::vector<XyRule> all_xy_rules();
  static std::vector<ZRule> all_z_rules();

  /// Throws ConfigError when any invariant is violated.
  void validate() const;

  /// The allowed (xy, z) classes sorted by class id, duplicates removed.
  [[nodiscard]] std::vector<ShapeClass> allowed_classes() const;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

using ordered_json = nlohmann::ordered_json;

/// Serialized form with a fixed key order; inverse of apply_config_json.
[[nodiscard]] ordered_json config_to_json(const GenConfig& config);

/// Overlays the keys present in `doc` onto `config`. Unknown keys and
/// ill-typed values raise ConfigError naming the key.
void apply_config_json(GenConfig& config, const nlohmann::json& doc);

[[nodiscard]] GenConfig config_from_json(const nlohmann::json& doc);

/// Parses a config file; `//` and `/* */` comments are accepted.
[[nodiscard]] nlohmann::json read_config_file(const std::filesystem::path& path);

/// Directory holding the shipped profile files. PRIMSYNTH_PROFILE_DIR overrides.
[[nodiscard]] std::filesystem::path profile_directory();
[[nodiscard]] std::vector<std::string> available_profiles();
[[nodiscard]] nlohmann::json load_profile(std::string_view name);

}  // namespace primsynth
