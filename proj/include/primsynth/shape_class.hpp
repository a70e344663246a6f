#pragma once

#include <array>
#include <string>
#include <string_view>

namespace primsynth {

/// Cross-section family: an ellipse or a w-gon with w in [3, 9].
class XyRule {
 public:
  static constexpr int kCount = 8;

  static XyRule ellipse() { return XyRule(0); }
  static XyRule polygon(int vertices);
  static XyRule from_index(int index);
  static XyRule parse(std::string_view name);

  [[nodiscard]] int index() const { return index_; }
  [[nodiscard]] bool is_ellipse() const { return index_ == 0; }
  /// Vertex count for polygons; 0 for the ellipse.
  [[nodiscard]] int vertex_count() const { return is_ellipse() ? 0 : index_ + 2; }
  [[nodiscard]] std::string name() const;

  friend bool operator==(XyRule, XyRule) = default;
  friend auto operator<=>(XyRule, XyRule) = default;

 private:
  explicit XyRule(int index) : index_(index) {}
  int index_ = 0;
};

/// Profile family along z.
enum class ZRule { Concave = 0, Convex = 1, Pillar = 2, Cone = 3 };

inline constexpr int kZRuleCount = 4;
inline constexpr int kShapeClassCount = XyRule::kCount * kZRuleCount;

[[nodiscard]] ZRule z_rule_from_index(int index);
[[nodiscard]] ZRule parse_z_rule(std::string_view name);
[[nodiscard]] std::string_view z_rule_name(ZRule rule);
[[nodiscard]] inline int z_rule_index(ZRule rule) { return static_cast<int>(rule); }

/// One of the 32 (xy, z) combinations. id = index(z) * 8 + index(xy).
struct ShapeClass {
  XyRule xy = XyRule::ellipse();
  ZRule z = ZRule::Concave;

  [[nodiscard]] int id() const { return z_rule_index(z) * XyRule::kCount + xy.index(); }
  static ShapeClass from_id(int id);
  [[nodiscard]] std::string name() const;

  friend bool operator==(const ShapeClass&, const ShapeClass&) = default;
};

}  // namespace primsynth
