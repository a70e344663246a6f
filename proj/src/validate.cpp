#include "primsynth/validate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "primsynth/errors.hpp"
#include "primsynth/pipeline.hpp"
#include "primsynth/volio.hpp"

namespace primsynth {

namespace fs = std::filesystem;

std::string_view check_name(Check check) {
  switch (check) {
    case Check::Files: return "files";
    case Check::ValueDomain: return "value_domain";
    case Check::Records: return "records";
    case Check::Order: return "order";
    case Check::OverlapAudit: return "overlap_audit";
    case Check::ShellMask: return "shell_mask";
    case Check::Overwrite: return "overwrite";
    case Check::Determinism: return "determinism";
  }
  return "?";
}

bool SampleReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckResult::Status::Fail; });
}

bool ValidationReport::passed() const {
  return dataset_errors.empty() &&
         std::all_of(samples.begin(), samples.end(), [](const SampleReport& s) { return s.passed(); });
}

std::size_t ValidationReport::failed_samples() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const SampleReport& s) { return !s.passed(); }));
}

std::array<std::size_t, kCheckCount> ValidationReport::failure_counts() const {
  std::array<std::size_t, kCheckCount> counts{};
  for (const auto& s : samples) {
    for (std::size_t c = 0; c < kCheckCount; ++c) counts[c] += s.checks[c].status == CheckResult::Status::Fail;
  }
  return counts;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << samples.size() - failed_samples() << "/" << samples.size() << " samples passed";
  const auto counts = failure_counts();
  for (std::size_t c = 0; c < kCheckCount; ++c) {
    if (counts[c] != 0) os << "; " << check_name(static_cast<Check>(c)) << " failed on " << counts[c];
  }
  for (const auto& e : dataset_errors) os << "; dataset: " << e;
  return os.str();
}

bool is_spot_checked(std::int64_t index, double fraction) {
  if (fraction <= 0.0) return false;
  if (fraction >= 1.0 || index == 0) return true;
  const double lo = std::floor(static_cast<double>(index) * fraction);
  const double hi = std::floor(static_cast<double>(index + 1) * fraction);
  return hi > lo;
}

namespace {

using Status = CheckResult::Status;

void pass(SampleReport& r, Check c) { r[c] = CheckResult{Status::Pass, {}}; }
void fail(SampleReport& r, Check c, std::string detail) { r[c] = CheckResult{Status::Fail, std::move(detail)}; }

std::string voxel_str(int x, int y, int z) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

// Calls fn(gx, gy, gz, li) for every in-bounds voxel covered by `local` placed at `center`.
template <class Fn>
void for_each_placed(const Mask3& local, Voxel origin, Voxel center, Dims bounds, Fn&& fn) {
  const Dims ld = local.dims();
  for (int k = 0; k < ld.z; ++k) {
    for (int j = 0; j < ld.y; ++j) {
      for (int i = 0; i < ld.x; ++i) {
        if (local(i, j, k) == 0) continue;
        const int gx = center.x + origin.x + i;
        const int gy = center.y + origin.y + j;
        const int gz = center.z + origin.z + k;
        if (bounds.contains(gx, gy, gz)) fn(gx, gy, gz);
      }
    }
  }
}

std::uint16_t max_label(const GenConfig& config, std::size_t accepted) {
  switch (config.label_mode) {
    case LabelMode::Binary: return 1;
    case LabelMode::ShapeClass: return static_cast<std::uint16_t>(kShapeClassCount);
    case LabelMode::Instance: return static_cast<std::uint16_t>(accepted);
  }
  return 0;
}

std::vector<std::uint8_t> expected_bytes(const LabelVolume& grid, const VolumeHeader& header, VolumeFormat format) {
  if (format == VolumeFormat::Nifti) return encode_nifti(grid, header);
  auto bytes = encode_raw_payload(grid, header);
  const std::string sidecar = encode_raw_sidecar(header);
  bytes.insert(bytes.end(), sidecar.begin(), sidecar.end());
  return bytes;
}

std::vector<std::uint8_t> stored_bytes(const fs::path& path, VolumeFormat format) {
  auto bytes = read_file_bytes(path);
  if (format == VolumeFormat::Raw) {
    const auto sidecar = read_file_bytes(raw_sidecar_path(path));
    bytes.insert(bytes.end(), sidecar.begin(), sidecar.end());
  }
  return bytes;
}

}  // namespace

SampleReport validate_sample(const DatasetManifest& manifest, const SampleEntry& entry, const fs::path& root,
                             bool spot_check) {
  const GenConfig& config = manifest.config;
  SampleReport report;
  report.index = entry.index;

  // Files
  LoadedVolume s;
  LoadedVolume m;
  try {
    s = read_volume(root / entry.s_path);
    m = read_volume(root / entry.m_path);
  } catch (const std::exception& e) {
    fail(report, Check::Files, e.what());
    return report;
  }
  if (s.header.dims != config.grid || m.header.dims != config.grid) {
    fail(report, Check::Files, "volume dims do not match the configured grid");
    return report;
  }
  if (s.header.datatype != s_volume_header(config).datatype || m.header.datatype != m_volume_header(config).datatype) {
    fail(report, Check::Files, "unexpected on-disk datatype");
    return report;
  }
  pass(report, Check::Files);

  std::vector<const PlacementRecord*> ordered;
  for (const auto& p : entry.placements) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const PlacementRecord* a, const PlacementRecord* b) { return a->order_index < b->order_index; });
  std::size_t accepted = 0;
  for (const auto* p : ordered) accepted += p->accepted;

  // Value domain
  {
    std::optional<std::string> problem;
    const auto intensity = static_cast<std::uint16_t>(config.intensity);
    const Dims d = config.grid;
    for (int z = 0; z < d.z && !problem; ++z) {
      for (int y = 0; y < d.y && !problem; ++y) {
        for (int x = 0; x < d.x; ++x) {
          const auto v = s.grid(x, y, z);
          if (v != 0 && v != intensity) {
            problem = "S value " + std::to_string(v) + " at " + voxel_str(x, y, z);
            break;
          }
        }
      }
    }
    const auto limit = max_label(config, accepted);
    for (std::size_t i = 0; i < m.grid.size() && !problem; ++i) {
      if (m.grid.data()[i] > limit) problem = "mask label " + std::to_string(m.grid.data()[i]) + " out of range";
    }
    if (problem) {
      fail(report, Check::ValueDomain, *problem);
    } else {
      pass(report, Check::ValueDomain);
    }
  }

  // Records: rebuild every object from the sample seed.
  std::vector<PrimitiveObject> objects;
  {
    std::optional<std::string> problem;
    for (std::size_t n = 0; n < ordered.size() && !problem; ++n) {
      const PlacementRecord& r = *ordered[n];
      if (r.order_index != static_cast<int>(n)) {
        problem = "order indices are not contiguous";
        break;
      }
      if (r.attempts < 1 || r.attempts > config.max_iter || (!r.accepted && r.attempts != config.max_iter)) {
        problem = "placement " + std::to_string(n) + " has an invalid attempt count";
        break;
      }
      PrimitiveObject obj = rebuild_object(config, entry.sample_seed, r);
      if (obj.volume != r.object_volume || obj.params != r.params || obj.radius_max != r.radius_max ||
          obj.z_extent() != r.z_extent) {
        problem = "placement " + std::to_string(n) + " does not match its rebuilt object";
        break;
      }
      objects.push_back(std::move(obj));
    }
    if (problem) {
      fail(report, Check::Records, *problem);
      return report;
    }
    pass(report, Check::Records);
  }

  // Order
  {
    bool ok = true;
    for (std::size_t n = 1; n < ordered.size(); ++n) ok = ok && ordered[n - 1]->object_volume >= ordered[n]->object_volume;
    if (ok) {
      pass(report, Check::Order);
    } else {
      fail(report, Check::Order, "placement volumes are not non-increasing");
    }
  }

  // Overlap audit against a fresh accumulator.
  {
    Mask3 occupied(config.grid);
    std::optional<std::string> problem;
    for (std::size_t n = 0; n < ordered.size() && !problem; ++n) {
      const PlacementRecord& r = *ordered[n];
      if (!r.accepted) continue;
      const PrimitiveObject& obj = objects[n];
      std::size_t in_bounds = 0;
      std::size_t shared = 0;
      std::vector<std::size_t> cells;
      for_each_placed(obj.occupancy, local_origin(obj), r.center, config.grid, [&](int x, int y, int z) {
        ++in_bounds;
        shared += occupied(x, y, z) != 0;
        cells.push_back(occupied.index(x, y, z));
      });
      if (in_bounds == 0) {
        problem = "accepted placement " + std::to_string(n) + " has no in-bounds voxels";
        break;
      }
      const double ratio = static_cast<double>(shared) / static_cast<double>(in_bounds);
      if (!overlap_acceptable(ratio, config)) {
        problem = "placement " + std::to_string(n) + " overlap ratio " + std::to_string(ratio) + " violates threshold";
      } else if (ratio != r.overlap_ratio || in_bounds != r.in_bounds_volume) {
        problem = "placement " + std::to_string(n) + " overlap record disagrees with replay";
      }
      for (auto c : cells) occupied.data()[c] = 1;
    }
    if (problem) {
      fail(report, Check::OverlapAudit, *problem);
    } else {
      pass(report, Check::OverlapAudit);
    }
  }

  // Expected mask (last writer wins) and shell union from the rebuilt objects.
  LabelVolume expected_m(config.grid);
  Mask3 shell_union(config.grid);
  {
    std::size_t ordinal = 0;
    for (std::size_t n = 0; n < ordered.size(); ++n) {
      const PlacementRecord& r = *ordered[n];
      if (!r.accepted) continue;
      const PrimitiveObject& obj = objects[n];
      const auto label = mask_label(config.label_mode, obj.shape_class, ordinal++);
      for_each_placed(obj.occupancy, local_origin(obj), r.center, config.grid,
                      [&](int x, int y, int z) { expected_m(x, y, z) = label; });
      const Mask3 shell = extract_shell(obj.occupancy);
      for_each_placed(shell, local_origin(obj), r.center, config.grid,
                      [&](int x, int y, int z) { shell_union(x, y, z) = 1; });
    }
  }

  // Shell / mask consistency
  {
    std::optional<std::string> problem;
    const Dims d = config.grid;
    for (int z = 0; z < d.z && !problem; ++z) {
      for (int y = 0; y < d.y && !problem; ++y) {
        for (int x = 0; x < d.x; ++x) {
          const bool in_s = s.grid(x, y, z) != 0;
          if (in_s != (shell_union(x, y, z) != 0)) {
            problem = "S differs from the union of placed shells at " + voxel_str(x, y, z);
            break;
          }
          if (in_s && (expected_m(x, y, z) == 0 || m.grid(x, y, z) == 0)) {
            problem = "S voxel outside the filled region at " + voxel_str(x, y, z);
            break;
          }
          if (in_s && config.label_mode == LabelMode::Binary && m.grid(x, y, z) != 1) {
            problem = "binary mask is not 1 under S at " + voxel_str(x, y, z);
            break;
          }
        }
      }
    }
    if (problem) {
      fail(report, Check::ShellMask, *problem);
    } else {
      pass(report, Check::ShellMask);
    }
  }

  // Overwrite correctness
  {
    const auto mismatch = std::mismatch(m.grid.data().begin(), m.grid.data().end(), expected_m.data().begin());
    if (mismatch.first == m.grid.data().end()) {
      pass(report, Check::Overwrite);
    } else {
      const auto at = static_cast<std::size_t>(mismatch.first - m.grid.data().begin());
      fail(report, Check::Overwrite,
           "mask label " + std::to_string(*mismatch.first) + " at voxel " + std::to_string(at) + ", expected " +
               std::to_string(*mismatch.second));
    }
  }

  // Determinism spot check
  if (spot_check) {
    try {
      const AssembledSample regen = generate_sample(config, entry.index);
      const bool same_bytes =
          expected_bytes(regen.s_volume, s_volume_header(config), config.output_format) ==
              stored_bytes(root / entry.s_path, config.output_format) &&
          expected_bytes(regen.m_volume, m_volume_header(config), config.output_format) ==
              stored_bytes(root / entry.m_path, config.output_format);
      if (!same_bytes) {
        fail(report, Check::Determinism, "regenerated volumes differ from stored bytes");
      } else if (regen.sample_seed != entry.sample_seed || regen.placements != entry.placements) {
        fail(report, Check::Determinism, "regenerated placement records differ from the manifest");
      } else {
        pass(report, Check::Determinism);
      }
    } catch (const std::exception& e) {
      fail(report, Check::Determinism, e.what());
    }
  }
  return report;
}

ValidationReport validate_dataset(const fs::path& manifest_path, const ValidationOptions& options) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path root = manifest_path.parent_path();
  ValidationReport report;
  if (static_cast<std::int64_t>(manifest.samples.size()) != manifest.config.n_samples) {
    report.dataset_errors.push_back("manifest lists " + std::to_string(manifest.samples.size()) +
                                    " samples, config expects " + std::to_string(manifest.config.n_samples));
  }
  if (fs::exists(root / kIncompleteMarker)) report.dataset_errors.push_back("incomplete-generation marker present");
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    if (manifest.samples[i].index != static_cast<std::int64_t>(i)) {
      report.dataset_errors.push_back("sample indices are not 0..N-1 in order");
      break;
    }
  }
  for (const auto& entry : manifest.samples) {
    report.samples.push_back(
        validate_sample(manifest, entry, root, is_spot_checked(entry.index, options.spot_check_fraction)));
  }
  return report;
}

}  // namespace primsynth
