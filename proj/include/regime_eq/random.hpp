#pragma once

// Counter-based random numbers. Every Monte Carlo path owns independent
// streams keyed by (seed, path index, stream id), so results do not depend on
// how paths are distributed over worker threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace regime_eq {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Well-known stream ids used by the simulators.
enum class StreamId : std::uint32_t { regime = 0, brownian = 1, bridge = 2 };

/// Sequential draws from one (seed, path, stream) Philox substream.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t path_index, StreamId stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_lo_(static_cast<std::uint32_t>(path_index)),
        path_hi_(static_cast<std::uint32_t>(path_index >> 32)),
        stream_(static_cast<std::uint32_t>(stream)) {}

  /// Uniform on (0, 1]; never returns 0 so log() is always finite.
  double uniform() noexcept {
    if (uniform_left_ == 0) {
      uniform_buf_ = next_pair();
      uniform_left_ = 2;
    }
    return uniform_buf_[--uniform_left_];
  }

  /// Standard normal via Box-Muller; one Philox block yields four normals from
  /// 32-bit uniforms (tails beyond about 6.66 sigma are not produced).
  double normal() noexcept {
    if (normal_left_ == 0) {
      const auto out = Philox4x32::apply({block_++, stream_, path_lo_, path_hi_}, key_);
      for (int pair = 0; pair < 2; ++pair) {
        const double u1 = (static_cast<double>(out[2 * pair]) + 0.5) * 0x1.0p-32;
        const double u2 = (static_cast<double>(out[2 * pair + 1]) + 0.5) * 0x1.0p-32;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        normal_buf_[2 * pair] = radius * std::cos(angle);
        normal_buf_[2 * pair + 1] = radius * std::sin(angle);
      }
      normal_left_ = 4;
    }
    return normal_buf_[--normal_left_];
  }

  /// Exponential holding time; +inf for a zero rate.
  double exponential(double rate) noexcept {
    const double u = uniform();
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(u) / rate;
  }

 private:
  std::array<double, 2> next_pair() noexcept {
    const auto out = Philox4x32::apply({block_++, stream_, path_lo_, path_hi_}, key_);
    return {to_unit(out[0], out[1]), to_unit(out[2], out[3])};
  }

  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
    return static_cast<double>(bits + 1) * 0x1.0p-53;
  }

  Philox4x32::Key key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  std::array<double, 2> uniform_buf_{};
  std::array<double, 4> normal_buf_{};
  int uniform_left_ = 0;
  int normal_left_ = 0;
};

}  // namespace regime_eq
