#pragma once

#include <cstdint>

namespace primsynth {

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t z);

/// Combines a parent key with a child index into a new 64-bit key.
[[nodiscard]] std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index);

/// Counter-based random stream: output n is mix64 of (key + n * golden gamma).
/// The whole sequence is a pure function of the key, so substreams can be
/// handed to any worker without coordination. All distributions below are
/// implemented here so results do not depend on the standard library vendor.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  /// Child stream keyed by (this stream's key, index). Does not advance this stream.
  [[nodiscard]] RandomStream substream(std::uint64_t index) const { return RandomStream(derive_key(key_, index)); }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t draws() const { return counter_; }

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double unit();

  /// Uniform real in [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [lo, hi] inclusive, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace primsynth
