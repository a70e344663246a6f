#include "primsynth/assembly.hpp"

#include <algorithm>
#include <numeric>

namespace primsynth {

Voxel local_origin(const PrimitiveObject& object) {
  const int h = object.half_extent();
  return Voxel{-h, -h, -(object.params.z_max / 2)};
}

Footprint Footprint::of(const Mask3& local, Voxel origin) {
  Footprint fp;
  const Dims d = local.dims();
  for (int k = 0; k < d.z; ++k) {
    for (int j = 0; j < d.y; ++j) {
      const std::uint8_t* row = local.data().data() + local.index(0, j, k);
      int i = 0;
      while (i < d.x) {
        if (row[i] == 0) {
          ++i;
          continue;
        }
        const int start = i;
        while (i < d.x && row[i] != 0) ++i;
        fp.runs.push_back(Run{j + origin.y, k + origin.z, start + origin.x, i - 1 + origin.x});
      }
    }
  }
  return fp;
}

OccupancyAccumulator::OccupancyAccumulator(Dims dims)
    : occupied_(dims), prefix_(static_cast<std::size_t>(dims.x + 1) * static_cast<std::size_t>(dims.y) *
                                   static_cast<std::size_t>(dims.z),
                               0) {}

OccupancyAccumulator::Overlap OccupancyAccumulator::measure(const Footprint& footprint, Voxel center) const {
  const Dims d = dims();
  const std::size_t stride = static_cast<std::size_t>(d.x) + 1;
  Overlap out;
  for (const auto& run : footprint.runs) {
    const int y = center.y + run.dy;
    const int z = center.z + run.dz;
    if (y < 0 || y >= d.y || z < 0 || z >= d.z) continue;
    const int x0 = std::max(0, center.x + run.dx0);
    const int x1 = std::min(d.x - 1, center.x + run.dx1);
    if (x0 > x1) continue;
    out.in_bounds += static_cast<std::size_t>(x1 - x0 + 1);
    const std::uint32_t* p = prefix_.data() + row(y, z) * stride;
    out.shared += p[x1 + 1] - p[x0];
  }
  return out;
}

void OccupancyAccumulator::add(const Footprint& footprint, Voxel center) {
  const Dims d = dims();
  const std::size_t stride = static_cast<std::size_t>(d.x) + 1;
  std::vector<std::size_t> touched;
  for (const auto& run : footprint.runs) {
    const int y = center.y + run.dy;
    const int z = center.z + run.dz;
    if (y < 0 || y >= d.y || z < 0 || z >= d.z) continue;
    const int x0 = std::max(0, center.x + run.dx0);
    const int x1 = std::min(d.x - 1, center.x + run.dx1);
    if (x0 > x1) continue;
    std::uint8_t* cells = occupied_.data().data() + occupied_.index(0, y, z);
    std::fill(cells + x0, cells + x1 + 1, std::uint8_t{1});
    touched.push_back(row(y, z));
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (std::size_t r : touched) {
    const std::uint8_t* cells = occupied_.data().data() + r * static_cast<std::size_t>(d.x);
    std::uint32_t* p = prefix_.data() + r * stride;
    p[0] = 0;
    for (int x = 0; x < d.x; ++x) p[x + 1] = p[x] + cells[x];
  }
}

std::vector<std::size_t> volume_order(std::span<const std::size_t> volumes) {
  std::vector<std::size_t> order(volumes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return volumes[a] > volumes[b]; });
  return order;
}

std::vector<PrimitiveObject> sort_by_volume(std::vector<PrimitiveObject> objects) {
  std::vector<std::size_t> volumes;
  volumes.reserve(objects.size());
  for (const auto& o : objects) volumes.push_back(o.volume);
  std::vector<PrimitiveObject> sorted;
  sorted.reserve(objects.size());
  for (std::size_t i : volume_order(volumes)) sorted.push_back(std::move(objects[i]));
  return sorted;
}

std::optional<double> overlap_ratio(const Mask3& occupied, std::span<const Voxel> candidate) {
  std::size_t in_bounds = 0;
  std::size_t shared = 0;
  for (const auto& v : candidate) {
    if (!occupied.dims().contains(v.x, v.y, v.z)) continue;
    ++in_bounds;
    shared += occupied(v.x, v.y, v.z) != 0;
  }
  if (in_bounds == 0) return std::nullopt;
  return static_cast<double>(shared) / static_cast<double>(in_bounds);
}

bool overlap_acceptable(double ratio, const GenConfig& config) {
  return config.overlap_enabled ? ratio < config.overlap_threshold : ratio == 0.0;
}

PlacementRecord place_object(OccupancyAccumulator& state, const PrimitiveObject& object, const Footprint& footprint,
                             const GenConfig& config, RandomStream& rng) {
  PlacementRecord rec;
  rec.shape_class = object.shape_class;
  rec.params = object.params;
  rec.radius_max = object.radius_max;
  rec.object_volume = object.volume;
  rec.z_extent = object.z_extent();

  const Dims d = state.dims();
  for (int attempt = 1; attempt <= config.max_iter; ++attempt) {
    Voxel c;
    c.x = static_cast<int>(rng.uniform_int(0, d.x - 1));
    c.y = static_cast<int>(rng.uniform_int(0, d.y - 1));
    c.z = static_cast<int>(rng.uniform_int(0, d.z - 1));
    const auto ov = state.measure(footprint, c);
    rec.attempts = attempt;
    rec.center = c;
    rec.in_bounds_volume = ov.in_bounds;
    if (ov.in_bounds == 0) {
      rec.overlap_ratio = 1.0;
      continue;
    }
    rec.overlap_ratio = static_cast<double>(ov.shared) / static_cast<double>(ov.in_bounds);
    if (overlap_acceptable(rec.overlap_ratio, config)) {
      rec.accepted = true;
      state.add(footprint, c);
      return rec;
    }
  }
  return rec;
}

Mask3 extract_shell(const Mask3& filled) {
  const Dims d = filled.dims();
  Mask3 shell(d);
  const auto& in = filled.data();
  auto& out = shell.data();
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(d.x);
  const std::size_t sz = static_cast<std::size_t>(d.x) * static_cast<std::size_t>(d.y);
  for (int k = 0; k < d.z; ++k) {
    for (int j = 0; j < d.y; ++j) {
      std::size_t idx = filled.index(0, j, k);
      for (int i = 0; i < d.x; ++i, ++idx) {
        if (in[idx] == 0) continue;
        const bool boundary = i == 0 || i == d.x - 1 || j == 0 || j == d.y - 1 || k == 0 || k == d.z - 1;
        if (boundary || in[idx - sx] == 0 || in[idx + sx] == 0 || in[idx - sy] == 0 || in[idx + sy] == 0 ||
            in[idx - sz] == 0 || in[idx + sz] == 0) {
          out[idx] = 1;
        }
      }
    }
  }
  return shell;
}

std::size_t AssembledSample::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(placements.begin(), placements.end(), [](const PlacementRecord& r) { return r.accepted; }));
}

std::uint16_t mask_label(LabelMode mode, const ShapeClass& shape_class, std::size_t accepted_ordinal) {
  switch (mode) {
    case LabelMode::Binary: return 1;
    case LabelMode::ShapeClass: return static_cast<std::uint16_t>(shape_class.id() + 1);
    case LabelMode::Instance: return static_cast<std::uint16_t>(accepted_ordinal + 1);
  }
  return 0;
}

namespace {

// Writes `value` wherever `local` is set, translated so the local origin lands at `center + origin`.
void stamp(LabelVolume& volume, const Mask3& local, Voxel origin, Voxel center, std::uint16_t value) {
  const Dims vd = volume.dims();
  const Dims ld = local.dims();
  for (int k = 0; k < ld.z; ++k) {
    const int z = center.z + origin.z + k;
    if (z < 0 || z >= vd.z) continue;
    for (int j = 0; j < ld.y; ++j) {
      const int y = center.y + origin.y + j;
      if (y < 0 || y >= vd.y) continue;
      const int x_lo = std::max(0, -(center.x + origin.x));
      const int x_hi = std::min(ld.x, vd.x - (center.x + origin.x));
      const std::uint8_t* src = local.data().data() + local.index(0, j, k);
      for (int i = x_lo; i < x_hi; ++i) {
        if (src[i] != 0) volume(center.x + origin.x + i, y, z) = value;
      }
    }
  }
}

}  // namespace

AssembledSample composite(std::span<const PlacedObject> placed, const GenConfig& config) {
  AssembledSample out;
  out.s_volume = LabelVolume(config.grid);
  out.m_volume = LabelVolume(config.grid);
  const auto intensity = static_cast<std::uint16_t>(config.intensity);
  for (std::size_t n = 0; n < placed.size(); ++n) {
    const PrimitiveObject& obj = *placed[n].object;
    const Voxel origin = local_origin(obj);
    stamp(out.m_volume, obj.occupancy, origin, placed[n].center, mask_label(config.label_mode, obj.shape_class, n));
    stamp(out.s_volume, extract_shell(obj.occupancy), origin, placed[n].center, intensity);
  }
  return out;
}

}  // namespace primsynth
