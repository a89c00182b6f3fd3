#ifndef FLS_RNG_HPP
#define FLS_RNG_HPP

#include <cstdint>
#include <limits>

namespace fls {

/// SplitMix64 (Steele, Lea, Flood 2014).  Used both as the per-unit generator
/// and as the mixing function that derives substream seeds, so every draw is
/// a pure function of (seed, replicate, unit) and independent of scheduling.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Seed of the substream keyed by (seed, a, b).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                       std::uint64_t b) noexcept {
  std::uint64_t h = SplitMix64::mix(seed ^ 0x6A09E667F3BCC909ULL);
  h = SplitMix64::mix(h ^ (a + 0x9E3779B97F4A7C15ULL));
  h = SplitMix64::mix(h ^ (b + 0x3C6EF372FE94F82BULL));
  return h;
}

} // namespace fls

#endif
