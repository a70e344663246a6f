#include "primsynth/manifest.hpp"

#include <fstream>
#include <sstream>

#include "primsynth/errors.hpp"

namespace primsynth {

namespace fs = std::filesystem;

std::string tool_version() { return PRIMSYNTH_VERSION; }

std::size_t SampleEntry::accepted_count() const {
  std::size_t n = 0;
  for (const auto& p : placements) n += p.accepted;
  return n;
}

std::array<std::int64_t, kShapeClassCount> SampleEntry::class_histogram() const {
  std::array<std::int64_t, kShapeClassCount> h{};
  for (const auto& p : placements) {
    if (p.accepted) ++h[static_cast<std::size_t>(p.shape_class.id())];
  }
  return h;
}

ordered_json placement_to_json(const PlacementRecord& r) {
  ordered_json j;
  j["order_index"] = r.order_index;
  j["draw_index"] = r.draw_index;
  j["class_id"] = r.shape_class.id();
  j["class_name"] = r.shape_class.name();
  j["accepted"] = r.accepted;
  j["attempts"] = r.attempts;
  j["center"] = {r.center.x, r.center.y, r.center.z};
  j["overlap_ratio"] = r.overlap_ratio;
  j["in_bounds_volume"] = r.in_bounds_volume;
  j["object_volume"] = r.object_volume;
  j["z_extent"] = r.z_extent;
  j["radius_max"] = r.radius_max;
  j["params"] = {{"o1", r.params.o1}, {"o2", r.params.o2}, {"o3", r.params.o3}, {"z_c", r.params.z_c},
                 {"z_max", r.params.z_max}};
  return j;
}

PlacementRecord placement_from_json(const nlohmann::json& j) {
  PlacementRecord r;
  r.order_index = j.at("order_index").get<int>();
  r.draw_index = j.at("draw_index").get<int>();
  r.shape_class = ShapeClass::from_id(j.at("class_id").get<int>());
  r.accepted = j.at("accepted").get<bool>();
  r.attempts = j.at("attempts").get<int>();
  const auto& c = j.at("center");
  r.center = Voxel{c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()};
  r.overlap_ratio = j.at("overlap_ratio").get<double>();
  r.in_bounds_volume = j.at("in_bounds_volume").get<std::size_t>();
  r.object_volume = j.at("object_volume").get<std::size_t>();
  r.z_extent = j.at("z_extent").get<int>();
  r.radius_max = j.at("radius_max").get<double>();
  const auto& p = j.at("params");
  r.params = ProfileParams{p.at("o1").get<double>(), p.at("o2").get<double>(), p.at("o3").get<double>(),
                           p.at("z_c").get<int>(), p.at("z_max").get<int>()};
  return r;
}

ordered_json manifest_to_json(const DatasetManifest& m) {
  ordered_json j;
  j["schema_version"] = m.schema_version;
  j["tool_version"] = m.tool_version;
  j["created_at"] = m.created_at ? ordered_json(*m.created_at) : ordered_json(nullptr);
  j["config"] = config_to_json(m.config);
  auto samples = ordered_json::array();
  for (const auto& s : m.samples) {
    ordered_json e;
    e["index"] = s.index;
    e["sample_seed"] = s.sample_seed;
    e["regeneration_attempts"] = s.regeneration_attempts;
    e["s_path"] = s.s_path;
    e["m_path"] = s.m_path;
    e["accepted_count"] = s.accepted_count();
    ordered_json hist = ordered_json::object();
    const auto h = s.class_histogram();
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h[c] != 0) hist[std::to_string(c)] = h[c];
    }
    e["class_histogram"] = hist;
    auto placements = ordered_json::array();
    for (const auto& p : s.placements) placements.push_back(placement_to_json(p));
    e["placements"] = placements;
    samples.push_back(e);
  }
  j["samples"] = samples;
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kManifestSchemaVersion) {
      throw FormatError("unsupported manifest schema_version " + std::to_string(m.schema_version));
    }
    m.tool_version = j.at("tool_version").get<std::string>();
    if (!j.at("created_at").is_null()) m.created_at = j.at("created_at").get<std::string>();
    m.config = config_from_json(j.at("config"));
    for (const auto& e : j.at("samples")) {
      SampleEntry s;
      s.index = e.at("index").get<std::int64_t>();
      s.sample_seed = e.at("sample_seed").get<std::uint64_t>();
      s.regeneration_attempts = e.at("regeneration_attempts").get<int>();
      s.s_path = e.at("s_path").get<std::string>();
      s.m_path = e.at("m_path").get<std::string>();
      for (const auto& p : e.at("placements")) s.placements.push_back(placement_from_json(p));
      if (e.at("accepted_count").get<std::size_t>() != s.accepted_count()) {
        throw FormatError("sample " + std::to_string(s.index) + ": accepted_count disagrees with placements");
      }
      m.samples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("malformed manifest config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  const std::string text = manifest_to_json(manifest).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("cannot parse manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace primsynth
