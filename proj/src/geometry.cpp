#include "primsynth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace primsynth {

namespace {

// Exact at both ends: t == 0 gives a, t == 1 gives b, a == b gives a.
double lerp_exact(double a, double b, double t) {
  if (t == 1.0) return b;
  return a + (b - a) * t;
}

void fill_ellipse(CenteredMask& mask, double a, double b) {
  const int h = mask.half_extent();
  const double a2 = a * a;
  const double b2 = b * b;
  auto inside = [&](int x, int y) {
    const double fx = static_cast<double>(x);
    const double fy = static_cast<double>(y);
    return fx * fx / a2 + fy * fy / b2 <= 1.0;
  };
  for (int y = -h; y <= h; ++y) {
    const double fy = static_cast<double>(y);
    const double rem = 1.0 - fy * fy / b2;
    if (rem < 0.0) continue;
    // Seed from the closed form, then settle on the exact predicate.
    int xr = std::min(h, static_cast<int>(std::floor(a * std::sqrt(rem))));
    while (xr + 1 <= h && inside(xr + 1, y)) ++xr;
    while (xr >= 0 && !inside(xr, y)) --xr;
    for (int x = -xr; x <= xr; ++x) mask.at(x, y) = 1;
  }
}

bool on_segment(const Point2& p, const Point2& q, double px, double py) {
  const double cross = (q.x - p.x) * (py - p.y) - (q.y - p.y) * (px - p.x);
  if (cross != 0.0) return false;
  return px >= std::min(p.x, q.x) && px <= std::max(p.x, q.x) && py >= std::min(p.y, q.y) &&
         py <= std::max(p.y, q.y);
}

void fill_polygon(CenteredMask& mask, const std::vector<Point2>& v) {
  const int h = mask.half_extent();
  const std::size_t n = v.size();
  std::vector<double> crossings;
  crossings.reserve(n);

  double ymin = v[0].y;
  double ymax = v[0].y;
  for (const auto& p : v) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int row_lo = std::max(-h, static_cast<int>(std::floor(ymin)));
  const int row_hi = std::min(h, static_cast<int>(std::ceil(ymax)));

  // Interior by scanline: a pixel is inside iff an odd number of edge
  // crossings lie strictly to its right (half-open rule in y).
  for (int y = row_lo; y <= row_hi; ++y) {
    const double py = static_cast<double>(y);
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2& a = v[i];
      const Point2& b = v[j];
      if ((a.y > py) != (b.y > py)) {
        crossings.push_back((b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x);
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // px in [c_lo, c_hi)
      const double lo = std::ceil(crossings[k]);
      const double hi = std::ceil(crossings[k + 1]) - 1.0;
      const int x0 = static_cast<int>(std::max(lo, static_cast<double>(-h)));
      const int x1 = static_cast<int>(std::min(hi, static_cast<double>(h)));
      for (int x = x0; x <= x1; ++x) mask.at(x, y) = 1;
    }
  }

  // Boundary pixels lying exactly on an edge count as inside.
  auto try_pixel = [&](int x, int y, const Point2& a, const Point2& b) {
    if (x < -h || x > h || y < -h || y > h) return;
    if (on_segment(a, b, static_cast<double>(x), static_cast<double>(y))) mask.at(x, y) = 1;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    const int ylo = static_cast<int>(std::ceil(std::min(a.y, b.y)));
    const int yhi = static_cast<int>(std::floor(std::max(a.y, b.y)));
    for (int y = ylo; y <= yhi; ++y) {
      double x = a.x;
      if (b.y != a.y) x = a.x + (b.x - a.x) * (static_cast<double>(y) - a.y) / (b.y - a.y);
      const int xf = static_cast<int>(std::floor(x));
      for (int dx = -1; dx <= 2; ++dx) try_pixel(xf + dx, y, a, b);
    }
    const int xlo = static_cast<int>(std::ceil(std::min(a.x, b.x)));
    const int xhi = static_cast<int>(std::floor(std::max(a.x, b.x)));
    for (int x = xlo; x <= xhi; ++x) {
      double y = a.y;
      if (b.x != a.x) y = a.y + (b.y - a.y) * (static_cast<double>(x) - a.x) / (b.x - a.x);
      const int yf = static_cast<int>(std::floor(y));
      for (int dy = -1; dy <= 2; ++dy) try_pixel(x, yf + dy, a, b);
    }
  }
}

}  // namespace

int PrimitiveObject::z_extent() const {
  const Dims d = occupancy.dims();
  const std::size_t layer = static_cast<std::size_t>(d.x) * static_cast<std::size_t>(d.y);
  int layers = 0;
  for (int k = 0; k < d.z; ++k) {
    const auto begin = occupancy.data().begin() + static_cast<std::ptrdiff_t>(layer * static_cast<std::size_t>(k));
    if (std::any_of(begin, begin + static_cast<std::ptrdiff_t>(layer), [](std::uint8_t v) { return v != 0; })) {
      ++layers;
    }
  }
  return layers;
}

ProfileParams sample_profile_params(ZRule rule, bool ia_enabled, RandomStream& rng) {
  ProfileParams p;
  if (ia_enabled) {
    p.z_max = static_cast<int>(rng.uniform_int(kZMaxLo, kZMaxHi));
    p.z_c = static_cast<int>(rng.uniform_int(kZcMargin, p.z_max - kZcMargin));
  } else {
    p.z_max = kFixedZMax;
    p.z_c = kFixedZc;
  }
  switch (rule) {
    case ZRule::Pillar:
      p.o1 = p.o2 = p.o3 = 1.0;
      break;
    case ZRule::Cone:
      p.o1 = 0.0;
      p.o2 = static_cast<double>(p.z_c) / static_cast<double>(p.z_max);
      p.o3 = 1.0;
      break;
    case ZRule::Concave:
      if (ia_enabled) {
        p.o1 = rng.uniform(0.8, 1.0);
        p.o2 = rng.uniform(0.2, 0.5);
        p.o3 = rng.uniform(0.8, 1.0);
      } else {
        p.o1 = 0.9;
        p.o2 = 0.35;
        p.o3 = 0.9;
      }
      break;
    case ZRule::Convex:
      if (ia_enabled) {
        p.o1 = rng.uniform(0.2, 0.5);
        p.o2 = rng.uniform(0.8, 1.0);
        p.o3 = rng.uniform(0.2, 0.5);
      } else {
        p.o1 = 0.35;
        p.o2 = 0.9;
        p.o3 = 0.35;
      }
      break;
  }
  return p;
}

namespace detail {

double rising_branch(const ProfileParams& p, int z) {
  if (z == p.z_c) return p.o2;
  return lerp_exact(p.o1, p.o2, static_cast<double>(z) / static_cast<double>(p.z_c));
}

double falling_branch(const ProfileParams& p, int z) {
  if (z == p.z_c) return p.o2;
  return lerp_exact(p.o2, p.o3, static_cast<double>(z - p.z_c) / static_cast<double>(p.z_max - p.z_c));
}

}  // namespace detail

double similarity_ratio(const ProfileParams& params, int z) {
  if (z < 0 || z > params.z_max) {
    throw std::out_of_range("similarity_ratio: z=" + std::to_string(z) + " outside [0, " +
                            std::to_string(params.z_max) + "]");
  }
  return z <= params.z_c ? detail::rising_branch(params, z) : detail::falling_branch(params, z);
}

SliceShape sample_xy_shape(XyRule rule, double r_max, RandomStream& rng) {
  if (!(r_max >= kRadiusMin)) {
    throw std::invalid_argument("sample_xy_shape: r_max must be >= " + std::to_string(kRadiusMin));
  }
  if (rule.is_ellipse()) {
    const double a = rng.uniform(kRadiusMin, r_max);
    const double b = rng.uniform(kRadiusMin, r_max);
    return EllipseShape{a, b};
  }
  const int c = rule.vertex_count();
  PolygonShape poly;
  poly.vertices.reserve(static_cast<std::size_t>(c));
  for (int k = 0; k < c; ++k) {
    const double r = rng.uniform(kRadiusMin, r_max);
    const double lo = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(c);
    const double hi = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(c);
    const double theta = rng.uniform(lo, hi);
    poly.vertices.push_back(Point2{r * std::cos(theta), r * std::sin(theta)});
  }
  return poly;
}

SliceShape fixed_xy_shape(XyRule rule, double r_max) {
  if (!(r_max >= kRadiusMin)) {
    throw std::invalid_argument("fixed_xy_shape: r_max must be >= " + std::to_string(kRadiusMin));
  }
  const double r = 0.5 * (kRadiusMin + r_max);
  if (rule.is_ellipse()) return EllipseShape{r, r};
  const int c = rule.vertex_count();
  PolygonShape poly;
  for (int k = 0; k < c; ++k) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(c);
    poly.vertices.push_back(Point2{r * std::cos(theta), r * std::sin(theta)});
  }
  return poly;
}

CenteredMask rasterize_slice(const SliceShape& shape, double scale, int half_extent) {
  if (!(scale >= 0.0)) throw std::invalid_argument("rasterize_slice: scale must be >= 0");
  CenteredMask mask(half_extent);
  if (scale == 0.0) return mask;
  if (const auto* e = std::get_if<EllipseShape>(&shape)) {
    fill_ellipse(mask, e->a * scale, e->b * scale);
  } else {
    const auto& poly = std::get<PolygonShape>(shape);
    if (poly.vertices.size() < 3) throw std::invalid_argument("rasterize_slice: polygon needs >= 3 vertices");
    std::vector<Point2> scaled;
    scaled.reserve(poly.vertices.size());
    for (const auto& p : poly.vertices) scaled.push_back(Point2{scale * p.x, scale * p.y});
    fill_polygon(mask, scaled);
  }
  return mask;
}

int half_extent_for(double r_max) { return static_cast<int>(std::ceil(r_max)) + 1; }

PrimitiveObject make_primitive(ShapeClass shape_class, const ProfileParams& params, const SliceShape& base_shape,
                               double r_max) {
  PrimitiveObject obj;
  obj.shape_class = shape_class;
  obj.params = params;
  obj.base_shape = base_shape;
  obj.radius_max = r_max;

  const int h = half_extent_for(r_max);
  const int side = 2 * h + 1;
  obj.occupancy = Mask3(Dims{side, side, params.z_max + 1});
  const std::size_t layer = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);

  double cached_scale = -1.0;
  CenteredMask slice;
  for (int t = 0; t <= params.z_max; ++t) {
    const double scale = params.z_max == 0 ? 1.0 : similarity_ratio(params, t);
    if (scale != cached_scale) {
      slice = rasterize_slice(base_shape, scale, h);
      cached_scale = scale;
    }
    std::copy(slice.data().begin(), slice.data().end(),
              obj.occupancy.data().begin() + static_cast<std::ptrdiff_t>(layer * static_cast<std::size_t>(t)));
  }
  obj.volume = static_cast<std::size_t>(std::count_if(obj.occupancy.data().begin(), obj.occupancy.data().end(),
                                                      [](std::uint8_t v) { return v != 0; }));
  return obj;
}

PrimitiveObject build_primitive(ShapeClass shape_class, const GenConfig& config, RandomStream& rng) {
  ProfileParams params = sample_profile_params(shape_class.z, config.ia_enabled, rng);
  const double r_max = config.ia_enabled ? rng.uniform(kRadiusMaxLo, kRadiusMaxHi) : kFixedRadiusMax;
  SliceShape shape = config.ia_enabled ? sample_xy_shape(shape_class.xy, r_max, rng)
                                       : fixed_xy_shape(shape_class.xy, r_max);
  if (config.planar_mode) {
    // A single layer at full scale; the z-rule has no effect.
    params = ProfileParams{1.0, 1.0, 1.0, 0, 0};
  }
  return make_primitive(shape_class, params, shape, r_max);
}

}  // namespace primsynth
