#include "primsynth/preview.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

#include "primsynth/errors.hpp"

namespace primsynth {

namespace fs = std::filesystem;

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  throw std::invalid_argument("unknown axis '" + std::string(name) + "' (expected x, y or z)");
}

const std::array<Rgb, 33>& label_palette() {
  static const std::array<Rgb, 33> palette{{
      {0, 0, 0},       {230, 25, 75},   {60, 180, 75},   {255, 225, 25},  {0, 130, 200},   {245, 130, 48},
      {145, 30, 180},  {70, 240, 240},  {240, 50, 230},  {210, 245, 60},  {250, 190, 212}, {0, 128, 128},
      {220, 190, 255}, {170, 110, 40},  {255, 250, 200}, {128, 0, 0},     {170, 255, 195}, {128, 128, 0},
      {255, 215, 180}, {0, 0, 128},     {128, 128, 128}, {255, 255, 255}, {106, 61, 154},  {255, 127, 0},
      {31, 120, 180},  {178, 223, 138}, {251, 154, 153}, {202, 178, 214}, {177, 89, 40},   {141, 211, 199},
      {190, 186, 218}, {251, 128, 114}, {128, 177, 211},
  }};
  return palette;
}

Rgb label_color(std::uint16_t label) {
  if (label == 0) return label_palette()[0];
  return label_palette()[1 + (static_cast<std::size_t>(label) - 1) % 32];
}

Rgb RgbImage::at(int x, int y) const {
  const std::size_t o = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
  return Rgb{pixels[o], pixels[o + 1], pixels[o + 2]};
}

std::pair<int, int> panel_size(Dims dims, Axis axis) {
  switch (axis) {
    case Axis::Z: return {dims.x, dims.y};
    case Axis::Y: return {dims.x, dims.z};
    case Axis::X: return {dims.y, dims.z};
  }
  return {0, 0};
}

RgbImage render_slices(const AssembledSample& sample, Axis axis, int slice_index) {
  const Dims d = sample.s_volume.dims();
  const int depth = axis == Axis::X ? d.x : axis == Axis::Y ? d.y : d.z;
  if (slice_index < 0 || slice_index >= depth) {
    throw std::out_of_range("slice index " + std::to_string(slice_index) + " outside [0, " + std::to_string(depth) +
                            ")");
  }
  const auto [pw, ph] = panel_size(d, axis);
  RgbImage img;
  img.width = 2 * pw + kPanelGap;
  img.height = ph;
  img.pixels.assign(3 * static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height), 0);
  auto put = [&](int x, int y, Rgb c) {
    const std::size_t o = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(x));
    img.pixels[o] = c[0];
    img.pixels[o + 1] = c[1];
    img.pixels[o + 2] = c[2];
  };
  for (int v = 0; v < ph; ++v) {
    for (int u = 0; u < pw; ++u) {
      int i = u;
      int j = v;
      int k = slice_index;
      if (axis == Axis::Y) {
        j = slice_index;
        k = v;
      } else if (axis == Axis::X) {
        i = slice_index;
        j = u;
        k = v;
      }
      const auto s = static_cast<std::uint8_t>(std::min<std::uint16_t>(sample.s_volume(i, j, k), 255));
      put(u, v, Rgb{s, s, s});
      put(pw + kPanelGap + u, v, label_color(sample.m_volume(i, j, k)));
    }
    for (int g = 0; g < kPanelGap; ++g) put(pw + g, v, kGapColor);
  }
  return img;
}

void render_preview(const AssembledSample& sample, Axis axis, int slice_index, const fs::path& path) {
  write_png(render_slices(sample, axis, slice_index), path);
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const RgbImage& image, const fs::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("libpng: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: cannot create info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    auto* row = const_cast<png_bytep>(image.pixels.data() + 3 * static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width));
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

RgbImage read_png(const fs::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&img, path.c_str()) == 0) {
    throw IoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  RgbImage out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.pixels.resize(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr) == 0) {
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path.string() + ": " + img.message);
  }
  return out;
}

}  // namespace primsynth
