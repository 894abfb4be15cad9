#pragma once

#include <cstdint>
#include <limits>

namespace dualinspect {

struct RngSeed {
  std::uint64_t value = 0;
};

/// SplitMix64 (Steele, Lea & Flood 2014). The only generator used in this
/// library. A single 64-bit state makes derived streams cheap, which is what
/// lets every item and every replicate own an independent stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  explicit SplitMix64(RngSeed seed) : state_(seed.value) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of the index-th derived stream. Serial and parallel consumers that
/// use the same index see the same numbers.
constexpr RngSeed derive_seed(RngSeed seed, std::uint64_t index) {
  return RngSeed{SplitMix64::finalize(seed.value ^ SplitMix64::finalize(index + 0x632BE59BD9B4E019ULL))};
}

/// Poisson variate: sequential-search inversion for mean <= 30, Hormann's
/// PTRS transformed rejection above.
std::uint64_t sample_poisson(SplitMix64& gen, double mean);

}  // namespace dualinspect
