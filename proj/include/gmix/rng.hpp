#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gmix {

/// Counter-based generator.
///
/// A stream is identified by (seed, stream id). The i-th output of a stream is
/// `mix64(key + i * 0x9E3779B97F4A7C15)` where `key = mix64(seed ^ mix64(stream
/// + 0x632BE59BD9B4E019))` and `mix64` is the SplitMix64 finalizer. Outputs
/// depend only on (seed, stream, i), so work can be split across threads by
/// giving each unit of work (a group, a probe, a replicate) its own stream id.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to take the log of.
  double uniform_open0() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one of the pair is discarded).
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Unit-rate exponential.
  double exponential() { return -std::log(uniform_open0()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream-id namespaces so independent consumers of one seed never collide.
namespace streams {
inline constexpr std::uint64_t kGroups = 0;  // + group index
inline constexpr std::uint64_t kDominating = 1ULL << 62;
inline constexpr std::uint64_t kProbe = (1ULL << 62) + (1ULL << 40);  // + eigvec * 64 + retry
inline constexpr std::uint64_t kBaseline = (1ULL << 62) + (1ULL << 41);
}  // namespace streams

}  // namespace gmix
