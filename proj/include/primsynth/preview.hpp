#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "primsynth/assembly.hpp"

namespace primsynth {

enum class Axis { X, Y, Z };

[[nodiscard]] Axis parse_axis(std::string_view name);

/// Background plus one color per shape class. Labels above 32 wrap around.
using Rgb = std::array<std::uint8_t, 3>;
[[nodiscard]] const std::array<Rgb, 33>& label_palette();
[[nodiscard]] Rgb label_color(std::uint16_t label);

/// Columns of neutral gray between the S panel (left) and the m panel (right).
inline constexpr int kPanelGap = 2;
inline constexpr Rgb kGapColor{64, 64, 64};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  [[nodiscard]] Rgb at(int x, int y) const;
};

/// Panel extent for a slice normal to `axis`: z -> (W, H), y -> (W, D), x -> (H, D).
[[nodiscard]] std::pair<int, int> panel_size(Dims dims, Axis axis);

/// Side-by-side image of one slice of S (grayscale) and m (palette).
/// Throws std::out_of_range when the slice index is outside the volume.
[[nodiscard]] RgbImage render_slices(const AssembledSample& sample, Axis axis, int slice_index);

void render_preview(const AssembledSample& sample, Axis axis, int slice_index, const std::filesystem::path& path);

void write_png(const RgbImage& image, const std::filesystem::path& path);
[[nodiscard]] RgbImage read_png(const std::filesystem::path& path);

}  // namespace primsynth
