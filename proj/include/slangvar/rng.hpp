#ifndef SLANGVAR_RNG_HPP
#define SLANGVAR_RNG_HPP

#include <cstdint>
#include <vector>

namespace slangvar {

// Deterministic 64-bit generator (SplitMix64). Experiments derive one
// independent stream per (seed, repeat, unit) tuple so that results do not
// depend on scheduling or platform. The exact constants are part of the
// file-format contract, see docs/FORMATS.md.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 significant bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t next_below(std::uint64_t n);

  // Standard normal via Box-Muller; the paired value is cached.
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Stream derivation: fold each component through the SplitMix64 finalizer.
SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a);
SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// First k elements of a Fisher-Yates shuffle of [0, n): a uniform k-subset
// in random order. Consumes exactly k draws.
std::vector<std::size_t> sample_without_replacement(SplitMix64& rng, std::size_t n,
                                                    std::size_t k);

}  // namespace slangvar

#endif
