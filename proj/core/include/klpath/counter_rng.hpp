#pragma once

#include <array>
#include <cstdint>

namespace klpath {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123): a keyed
/// bijection of a 128-bit counter. Streams addressed by distinct counters or
/// keys are statistically independent, and any draw can be regenerated
/// without replaying the ones before it.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key) noexcept : key_(key) {}
  explicit constexpr Philox4x32(std::uint64_t key) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  Counter operator()(Counter counter) const noexcept;

  /// Convenience addressing by two 64-bit words.
  Counter operator()(std::uint64_t lo, std::uint64_t hi) const noexcept {
    return (*this)({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                    static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)});
  }

 private:
  Key key_;
};

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the index-th member of a family derived from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(mix64(base) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in the open interval (0, 1) from 64 random bits.
constexpr double open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift (bias < bound / 2^64).
constexpr std::uint64_t bounded(std::uint64_t bits, std::uint64_t bound) noexcept {
  __extension__ typedef unsigned __int128 wide;
  return static_cast<std::uint64_t>((static_cast<wide>(bits) * bound) >> 64);
}

/// Sequential 64-bit draws from one Philox stream.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept : gen_(seed), stream_(stream) {}

  std::uint64_t next() noexcept {
    const auto out = gen_(index_++, stream_);
    return static_cast<std::uint64_t>(out[0]) | static_cast<std::uint64_t>(out[1]) << 32;
  }

 private:
  Philox4x32 gen_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
};

}  // namespace klpath
