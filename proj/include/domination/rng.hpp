#pragma once

#include <cstdint>
#include <limits>

namespace domination {

/// Counter-based generator: the i-th output of a stream is a fixed bijective
/// mix of (key + i * golden_gamma). Streams are addressed by
/// (seed, replication, attempt) so a replication draws the same numbers
/// whichever thread runs it. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t attempt = 0)
      : key_(mix(mix(seed ^ 0x6a09e667f3bcc909ULL) + mix(replication + 0x3c6ef372fe94f82bULL) +
                 attempt * 0xbb67ae8584caa73bULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform on the open interval (0, 1) with 53 bits.
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  [[nodiscard]] std::uint64_t draws() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace domination
