#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace primsynth {

/// Extent of a dense voxel grid, x fastest.
struct Dims {
  int x = 0;
  int y = 0;
  int z = 0;

  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(y) * static_cast<std::size_t>(z);
  }
  [[nodiscard]] bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < x && j < y && k < z;
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense 3D grid stored x-fastest. bool-like grids use std::uint8_t.
template <class T>
class Grid3 {
 public:
  Grid3() = default;
  explicit Grid3(Dims dims, T fill = T{}) : dims_(dims), data_(dims.count(), fill) {
    if (dims.x < 0 || dims.y < 0 || dims.z < 0) {
      throw std::invalid_argument("Grid3: negative dimension");
    }
  }

  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.x) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.y) * static_cast<std::size_t>(k));
  }

  T& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  /// Value at (i,j,k), or `outside` when the coordinate is off-grid.
  [[nodiscard]] T at_or(int i, int j, int k, T outside) const {
    return dims_.contains(i, j, k) ? data_[index(i, j, k)] : outside;
  }

  [[nodiscard]] std::vector<T>& data() { return data_; }
  [[nodiscard]] const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Grid3&, const Grid3&) = default;

 private:
  Dims dims_{};
  std::vector<T> data_;
};

/// Square 2D grid addressed by signed offsets from its center pixel.
class CenteredMask {
 public:
  CenteredMask() = default;
  explicit CenteredMask(int half_extent)
      : half_(half_extent), side_(2 * half_extent + 1),
        data_(static_cast<std::size_t>(side_) * static_cast<std::size_t>(side_), 0) {
    if (half_extent < 0) throw std::invalid_argument("CenteredMask: negative half extent");
  }

  [[nodiscard]] int half_extent() const { return half_; }
  [[nodiscard]] int side() const { return side_; }

  std::uint8_t& at(int x, int y) { return data_[offset(x, y)]; }
  [[nodiscard]] std::uint8_t at(int x, int y) const { return data_[offset(x, y)]; }

  [[nodiscard]] std::size_t count() const {
    std::size_t n = 0;
    for (auto v : data_) n += v != 0;
    return n;
  }

  [[nodiscard]] const std::vector<std::uint8_t>& data() const { return data_; }

  friend bool operator==(const CenteredMask&, const CenteredMask&) = default;

 private:
  [[nodiscard]] std::size_t offset(int x, int y) const {
    return static_cast<std::size_t>(x + half_) + static_cast<std::size_t>(side_) * static_cast<std::size_t>(y + half_);
  }

  int half_ = 0;
  int side_ = 1;
  std::vector<std::uint8_t> data_{0};
};

using Mask3 = Grid3<std::uint8_t>;
using LabelVolume = Grid3<std::uint16_t>;

}  // namespace primsynth
