#ifndef EPIFV_RNG_HPP
#define EPIFV_RNG_HPP

#include <cstdint>

namespace epifv {

/// SplitMix64. State advances by the golden-gamma increment and the output
/// is the finalized state, so distinct seeds give independent streams and
/// the sequence is identical on every platform.
///
/// Reference sequence from seed 0:
///   e220a8397b1dcdaf, 6e789e6aa1b965f4, 06c45d188009454f, f88bb8a8724c81ec
/// From seed 42:
///   bdd732262feb6e95, 28efe333b266f103, 47526757130f9f52
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 bits of the next output.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace epifv

#endif
