#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "primsynth/config.hpp"
#include "primsynth/grid.hpp"
#include "primsynth/random.hpp"
#include "primsynth/shape_class.hpp"

namespace primsynth {

/// Slice radius bounds (voxels) and the z-extent law used with instance augmentation.
inline constexpr double kRadiusMin = 15.0;
inline constexpr double kRadiusMaxLo = 30.0;
inline constexpr double kRadiusMaxHi = 80.0;
inline constexpr int kZMaxLo = 10;
inline constexpr int kZMaxHi = 50;
inline constexpr int kZcMargin = 3;

/// Values used for every object when instance augmentation is off.
inline constexpr int kFixedZMax = 30;
inline constexpr int kFixedZc = 15;
inline constexpr double kFixedRadiusMax = 55.0;

/// Piecewise-linear similarity-ratio profile: f rises (or falls) linearly
/// from o1 at z=0 to o2 at z=z_c, then to o3 at z=z_max.
struct ProfileParams {
  double o1 = 1.0;
  double o2 = 1.0;
  double o3 = 1.0;
  int z_c = 0;
  int z_max = 0;

  friend bool operator==(const ProfileParams&, const ProfileParams&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Polygon vertices in polar-sampled order (angles non-decreasing).
struct PolygonShape {
  std::vector<Point2> vertices;
  friend bool operator==(const PolygonShape&, const PolygonShape&) = default;
};

/// Axis-aligned ellipse with semi-axes a (along x) and b (along y).
struct EllipseShape {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const EllipseShape&, const EllipseShape&) = default;
};

using SliceShape = std::variant<PolygonShape, EllipseShape>;

/// One rasterized primitive in local coordinates. The occupancy grid is
/// (2h+1) x (2h+1) x (z_max+1) with the slice center at (h, h).
struct PrimitiveObject {
  Mask3 occupancy;
  ShapeClass shape_class;
  ProfileParams params;
  SliceShape base_shape;
  double radius_max = 0.0;
  std::size_t volume = 0;

  [[nodiscard]] int half_extent() const { return (occupancy.dims().x - 1) / 2; }
  /// Number of z-layers holding at least one voxel.
  [[nodiscard]] int z_extent() const;
};

/// Draws the profile parameters of a z-rule. With `ia_enabled` false the
/// fixed defaults are returned and `rng` is left untouched.
[[nodiscard]] ProfileParams sample_profile_params(ZRule rule, bool ia_enabled, RandomStream& rng);

/// f(z) for 0 <= z <= z_max. Throws std::out_of_range outside that interval.
[[nodiscard]] double similarity_ratio(const ProfileParams& params, int z);

namespace detail {
/// Linear segment from (0, o1) to (z_c, o2), evaluated at z.
[[nodiscard]] double rising_branch(const ProfileParams& params, int z);
/// Linear segment from (z_c, o2) to (z_max, o3), evaluated at z.
[[nodiscard]] double falling_branch(const ProfileParams& params, int z);
}  // namespace detail

/// Random base slice: a polygon with one vertex per angular sector, or an
/// ellipse, with radii drawn from [kRadiusMin, r_max].
[[nodiscard]] SliceShape sample_xy_shape(XyRule rule, double r_max, RandomStream& rng);

/// Base slice used with instance augmentation off: all radii at the middle of
/// [kRadiusMin, r_max] and polygon vertices at their sector midpoints.
[[nodiscard]] SliceShape fixed_xy_shape(XyRule rule, double r_max);

/// Pixels whose centers lie inside or on the shape scaled by `scale`.
/// Polygons use the even-odd rule. scale == 0 gives an empty mask.
[[nodiscard]] CenteredMask rasterize_slice(const SliceShape& shape, double scale, int half_extent);

/// Local grid half extent for a slice of radius up to r_max.
[[nodiscard]] int half_extent_for(double r_max);

/// Stacks scaled copies of `base_shape` for t = 0..z_max. In planar mode a
/// single layer at scale 1 is produced.
[[nodiscard]] PrimitiveObject make_primitive(ShapeClass shape_class, const ProfileParams& params,
                                             const SliceShape& base_shape, double r_max);

/// Samples all parameters of one object of the given class and rasterizes it.
[[nodiscard]] PrimitiveObject build_primitive(ShapeClass shape_class, const GenConfig& config, RandomStream& rng);

}  // namespace primsynth
