#include "primsynth/random.hpp"

#include <stdexcept>

namespace primsynth {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent + kGamma) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::uniform(double lo, double hi) {
  if (lo == hi) {
    return lo;
  }
  const double v = lo + (hi - lo) * unit();
  return v > hi ? hi : v;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) {
    throw std::invalid_argument("uniform_int: empty range");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~0ULL) {
    return static_cast<std::int64_t>(next_u64());
  }
  const std::uint64_t n = span + 1;
  // Rejection keeps the draw unbiased: accept only below the largest multiple of n.
  const std::uint64_t limit = (~0ULL) - ((~0ULL) % n + 1) % n;
  std::uint64_t v = next_u64();
  while (v > limit) {
    v = next_u64();
  }
  return lo + static_cast<std::int64_t>(v % n);
}

}  // namespace primsynth
