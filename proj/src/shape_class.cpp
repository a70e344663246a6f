#include "primsynth/shape_class.hpp"

#include <stdexcept>

namespace primsynth {

namespace {
constexpr std::array<std::string_view, kZRuleCount> kZNames{"concave", "convex", "pillar", "cone"};
}

XyRule XyRule::polygon(int vertices) {
  if (vertices < 3 || vertices > 9) {
    throw std::invalid_argument("polygon vertex count must be in [3, 9], got " + std::to_string(vertices));
  }
  return XyRule(vertices - 2);
}

XyRule XyRule::from_index(int index) {
  if (index < 0 || index >= kCount) {
    throw std::invalid_argument("xy rule index out of range: " + std::to_string(index));
  }
  return XyRule(index);
}

XyRule XyRule::parse(std::string_view name) {
  if (name == "ellipse") return ellipse();
  if (name.size() == 6 && name.substr(1) == "-poly" && name[0] >= '3' && name[0] <= '9') {
    return polygon(name[0] - '0');
  }
  throw std::invalid_argument("unknown xy rule '" + std::string(name) + "'");
}

std::string XyRule::name() const {
  return is_ellipse() ? std::string("ellipse") : std::to_string(vertex_count()) + "-poly";
}

ZRule z_rule_from_index(int index) {
  if (index < 0 || index >= kZRuleCount) {
    throw std::invalid_argument("z rule index out of range: " + std::to_string(index));
  }
  return static_cast<ZRule>(index);
}

ZRule parse_z_rule(std::string_view name) {
  for (int i = 0; i < kZRuleCount; ++i) {
    if (kZNames[static_cast<std::size_t>(i)] == name) return static_cast<ZRule>(i);
  }
  throw std::invalid_argument("unknown z rule '" + std::string(name) + "'");
}

std::string_view z_rule_name(ZRule rule) { return kZNames[static_cast<std::size_t>(z_rule_index(rule))]; }

ShapeClass ShapeClass::from_id(int id) {
  if (id < 0 || id >= kShapeClassCount) {
    throw std::invalid_argument("shape class id out of range: " + std::to_string(id));
  }
  return ShapeClass{XyRule::from_index(id % XyRule::kCount), z_rule_from_index(id / XyRule::kCount)};
}

std::string ShapeClass::name() const { return xy.name() + "/" + std::string(z_rule_name(z)); }

}  // namespace primsynth
