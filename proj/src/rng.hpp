#ifndef OBPROJ_RNG_HPP
#define OBPROJ_RNG_HPP

#include <cstdint>

namespace obproj {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937 so that
/// seeded experiment outputs reproduce bit-for-bit across platforms and
/// reimplementations; the full recurrence is documented in the README.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

}  // namespace obproj

#endif  // OBPROJ_RNG_HPP
