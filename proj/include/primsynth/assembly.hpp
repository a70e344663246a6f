#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "primsynth/config.hpp"
#include "primsynth/geometry.hpp"
#include "primsynth/grid.hpp"
#include "primsynth/random.hpp"

namespace primsynth {

struct Voxel {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const Voxel&, const Voxel&) = default;
};

/// Local voxel (i, j, k) of an object lands at center + (i - h, j - h, k - z_max / 2).
[[nodiscard]] Voxel local_origin(const PrimitiveObject& object);

/// Row-run encoding of an occupancy grid relative to its placement center.
/// Each run covers x offsets [dx0, dx1] inclusive.
struct Footprint {
  struct Run {
    int dy = 0;
    int dz = 0;
    int dx0 = 0;
    int dx1 = 0;
  };
  std::vector<Run> runs;

  static Footprint of(const Mask3& local, Voxel origin);
};

/// Occupied region A of the volume being assembled, with per-row prefix
/// counts so |A ∩ run| is O(1).
class OccupancyAccumulator {
 public:
  explicit OccupancyAccumulator(Dims dims);

  [[nodiscard]] const Dims& dims() const { return occupied_.dims(); }
  [[nodiscard]] const Mask3& occupied() const { return occupied_; }

  struct Overlap {
    std::size_t in_bounds = 0;
    std::size_t shared = 0;
  };

  /// In-bounds size of the footprint placed at `center` and its intersection with A.
  [[nodiscard]] Overlap measure(const Footprint& footprint, Voxel center) const;

  /// A := A ∪ (footprint at center), clipped to bounds.
  void add(const Footprint& footprint, Voxel center);

 private:
  [[nodiscard]] std::size_t row(int y, int z) const {
    return static_cast<std::size_t>(y) + static_cast<std::size_t>(dims().y) * static_cast<std::size_t>(z);
  }

  Mask3 occupied_;
  std::vector<std::uint32_t> prefix_;  // (W + 1) entries per (y, z) row
};

struct PlacementRecord {
  int order_index = 0;
  int draw_index = 0;
  ShapeClass shape_class;
  ProfileParams params;
  double radius_max = 0.0;
  std::size_t object_volume = 0;
  int z_extent = 0;
  Voxel center;
  bool accepted = false;
  int attempts = 0;
  /// Ratio at the accepting attempt; for rejected objects, the last attempt's
  /// ratio, or 1 when no attempt had an in-bounds voxel.
  double overlap_ratio = 1.0;
  std::size_t in_bounds_volume = 0;

  friend bool operator==(const PlacementRecord&, const PlacementRecord&) = default;
};

/// Stable sort by volume, largest first.
[[nodiscard]] std::vector<PrimitiveObject> sort_by_volume(std::vector<PrimitiveObject> objects);

/// Permutation applied by sort_by_volume: result[i] is the original index of the i-th object.
[[nodiscard]] std::vector<std::size_t> volume_order(std::span<const std::size_t> volumes);

/// |A ∩ B| / |B| over the in-bounds voxels of B; nullopt when none are in bounds.
[[nodiscard]] std::optional<double> overlap_ratio(const Mask3& occupied, std::span<const Voxel> candidate);

/// Acceptance test for one attempt.
[[nodiscard]] bool overlap_acceptable(double ratio, const GenConfig& config);

/// Up to config.max_iter attempts with centers drawn uniformly over the grid.
/// On acceptance the accumulator absorbs the object's in-bounds voxels.
PlacementRecord place_object(OccupancyAccumulator& state, const PrimitiveObject& object, const Footprint& footprint,
                             const GenConfig& config, RandomStream& rng);

/// Voxels of `filled` with at least one 6-neighbor that is empty or off-grid.
[[nodiscard]] Mask3 extract_shell(const Mask3& filled);

struct PlacedObject {
  const PrimitiveObject* object = nullptr;
  Voxel center;
};

struct AssembledSample {
  LabelVolume s_volume;
  LabelVolume m_volume;
  std::vector<PlacementRecord> placements;
  std::uint64_t sample_seed = 0;
  int regeneration_attempts = 0;

  [[nodiscard]] std::size_t accepted_count() const;
};

/// Label written into the mask for the n-th accepted object (0-based).
[[nodiscard]] std::uint16_t mask_label(LabelMode mode, const ShapeClass& shape_class, std::size_t accepted_ordinal);

/// Writes masks in placement order (later objects overwrite earlier labels)
/// and the union of per-object shells at config.intensity.
[[nodiscard]] AssembledSample composite(std::span<const PlacedObject> placed, const GenConfig& config);

}  // namespace primsynth
