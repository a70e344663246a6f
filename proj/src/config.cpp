#include "primsynth/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "primsynth/errors.hpp"

namespace primsynth {

namespace fs = std::filesystem;

std::string_view label_mode_name(LabelMode mode) {
  switch (mode) {
    case LabelMode::Binary: return "binary";
    case LabelMode::ShapeClass: return "shape_class";
    case LabelMode::Instance: return "instance";
  }
  return "?";
}

LabelMode parse_label_mode(std::string_view name) {
  if (name == "binary") return LabelMode::Binary;
  if (name == "shape_class") return LabelMode::ShapeClass;
  if (name == "instance") return LabelMode::Instance;
  throw ConfigError("unknown label_mode '" + std::string(name) + "' (expected binary, shape_class or instance)");
}

std::string_view volume_format_name(VolumeFormat format) {
  return format == VolumeFormat::Nifti ? "nifti" : "raw";
}

VolumeFormat parse_volume_format(std::string_view name) {
  if (name == "nifti") return VolumeFormat::Nifti;
  if (name == "raw") return VolumeFormat::Raw;
  throw ConfigError("unknown output_format '" + std::string(name) + "' (expected nifti or raw)");
}

std::vector<XyRule> GenConfig::all_xy_rules() {
  std::vector<XyRule> rules;
  for (int i = 0; i < XyRule::kCount; ++i) rules.push_back(XyRule::from_index(i));
  return rules;
}

std::vector<ZRule> GenConfig::all_z_rules() {
  return {ZRule::Concave, ZRule::Convex, ZRule::Pillar, ZRule::Cone};
}

void GenConfig::validate() const {
  if (grid.x < 16 || grid.y < 16 || grid.z < 16) {
    throw ConfigError("grid dimensions must each be >= 16");
  }
  if (m_objects < 1) throw ConfigError("m_objects must be >= 1");
  if (m_objects_max != 0 && m_objects_max < m_objects) {
    throw ConfigError("m_objects_max must be 0 (fixed count) or >= m_objects");
  }
  if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0)) {
    throw ConfigError("overlap_threshold must lie in [0, 1]");
  }
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (intensity < 1 || intensity > 255) throw ConfigError("intensity must lie in [1, 255]");
  if (allowed_xy.empty()) throw ConfigError("allowed_xy must not be empty");
  if (allowed_z.empty()) throw ConfigError("allowed_z must not be empty");
  if (n_samples < 0) throw ConfigError("n_samples must be >= 0");
  const int max_labels = std::max(m_objects, m_objects_max);
  if (label_mode == LabelMode::Instance && max_labels > 65535) {
    throw ConfigError("instance labels exceed the 16-bit mask range");
  }
}

std::vector<ShapeClass> GenConfig::allowed_classes() const {
  std::vector<int> ids;
  for (ZRule z : allowed_z) {
    for (XyRule xy : allowed_xy) ids.push_back(ShapeClass{xy, z}.id());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<ShapeClass> classes;
  classes.reserve(ids.size());
  for (int id : ids) classes.push_back(ShapeClass::from_id(id));
  return classes;
}

ordered_json config_to_json(const GenConfig& c) {
  ordered_json j;
  j["grid"] = {c.grid.x, c.grid.y, c.grid.z};
  j["m_objects"] = c.m_objects;
  j["m_objects_max"] = c.m_objects_max;
  j["overlap_threshold"] = c.overlap_threshold;
  j["max_iter"] = c.max_iter;
  j["intensity"] = c.intensity;
  j["label_mode"] = label_mode_name(c.label_mode);
  j["instance_augmentation"] = c.ia_enabled;
  j["overlap"] = c.overlap_enabled;
  j["planar"] = c.planar_mode;
  auto xy = ordered_json::array();
  for (auto r : c.allowed_xy) xy.push_back(r.name());
  j["allowed_xy"] = xy;
  auto z = ordered_json::array();
  for (auto r : c.allowed_z) z.push_back(z_rule_name(r));
  j["allowed_z"] = z;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.master_seed;
  j["output_format"] = volume_format_name(c.output_format);
  return j;
}

namespace {

template <class T>
T get_as(const nlohmann::json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type: " + value.dump());
  }
}

bool get_bool(const nlohmann::json& value, const std::string& key) {
  if (!value.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
  return value.get<bool>();
}

std::int64_t get_int(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return value.get<std::int64_t>();
}

int get_small_int(const nlohmann::json& value, const std::string& key) {
  const auto v = get_int(value, key);
  if (v < -(1LL << 30) || v > (1LL << 30)) throw ConfigError("config key '" + key + "' is out of range");
  return static_cast<int>(v);
}

std::vector<std::string> get_names(const nlohmann::json& value, const std::string& key) {
  if (!value.is_array()) throw ConfigError("config key '" + key + "' must be an array of names");
  std::vector<std::string> out;
  for (const auto& e : value) {
    if (!e.is_string()) throw ConfigError("config key '" + key + "' must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

void apply_config_json(GenConfig& c, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "description") {
        // Free text; kept in profile files for humans.
      } else if (key == "grid") {
        if (!value.is_array() || value.size() != 3) throw ConfigError("config key 'grid' must be [W, H, D]");
        c.grid = Dims{get_small_int(value[0], key), get_small_int(value[1], key), get_small_int(value[2], key)};
      } else if (key == "m_objects") {
        c.m_objects = get_small_int(value, key);
      } else if (key == "m_objects_max") {
        c.m_objects_max = get_small_int(value, key);
      } else if (key == "overlap_threshold") {
        if (!value.is_number()) throw ConfigError("config key 'overlap_threshold' must be a number");
        c.overlap_threshold = value.get<double>();
      } else if (key == "max_iter") {
        c.max_iter = get_small_int(value, key);
      } else if (key == "intensity") {
        c.intensity = get_small_int(value, key);
      } else if (key == "label_mode") {
        c.label_mode = parse_label_mode(get_as<std::string>(value, key));
      } else if (key == "instance_augmentation") {
        c.ia_enabled = get_bool(value, key);
      } else if (key == "overlap") {
        c.overlap_enabled = get_bool(value, key);
      } else if (key == "planar") {
        c.planar_mode = get_bool(value, key);
      } else if (key == "allowed_xy") {
        std::vector<XyRule> rules;
        for (const auto& n : get_names(value, key)) rules.push_back(XyRule::parse(n));
        c.allowed_xy = rules;
      } else if (key == "allowed_z") {
        std::vector<ZRule> rules;
        for (const auto& n : get_names(value, key)) rules.push_back(parse_z_rule(n));
        c.allowed_z = rules;
      } else if (key == "n_samples") {
        c.n_samples = get_int(value, key);
      } else if (key == "seed") {
        if (value.is_number_unsigned()) {
          c.master_seed = value.get<std::uint64_t>();
        } else {
          const auto v = get_int(value, key);
          if (v < 0) throw ConfigError("config key 'seed' must be non-negative");
          c.master_seed = static_cast<std::uint64_t>(v);
        }
      } else if (key == "output_format") {
        c.output_format = parse_volume_format(get_as<std::string>(value, key));
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

GenConfig config_from_json(const nlohmann::json& doc) {
  GenConfig c;
  apply_config_json(c, doc);
  return c;
}

nlohmann::json read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str(), nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
  }
}

fs::path profile_directory() {
  if (const char* env = std::getenv("PRIMSYNTH_PROFILE_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path(PRIMSYNTH_PROFILE_DIR);
}

std::vector<std::string> available_profiles() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(profile_directory(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

nlohmann::json load_profile(std::string_view name) {
  const fs::path path = profile_directory() / (std::string(name) + ".json");
  if (!fs::exists(path)) {
    std::string known;
    for (const auto& p : available_profiles()) known += (known.empty() ? "" : ", ") + p;
    throw ConfigError("unknown profile '" + std::string(name) + "' (available: " + known + ")");
  }
  return read_config_file(path);
}

}  // namespace primsynth
