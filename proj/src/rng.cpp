#include "slangvar/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slangvar {

std::uint64_t SplitMix64::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  const std::uint64_t rem = (0ULL - n) % n;  // 2^64 mod n
  const std::uint64_t bound = 0ULL - rem;    // largest multiple of n
  for (;;) {
    const std::uint64_t v = next_u64();
    if (bound == 0 || v < bound) return v % n;
  }
}

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log stays finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  cached_ = mag * std::sin(ang);
  has_cached_ = true;
  return mag * std::cos(ang);
}

namespace {
std::uint64_t fold(std::uint64_t acc, std::uint64_t part) {
  return SplitMix64::mix(acc + 0x9E3779B97F4A7C15ULL + part * 0xBF58476D1CE4E5B9ULL);
}
}  // namespace

SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a) {
  return SplitMix64(fold(seed, a));
}

SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return SplitMix64(fold(fold(seed, a), b));
}

std::vector<std::size_t> sample_without_replacement(SplitMix64& rng, std::size_t n,
                                                    std::size_t k) {
  if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace slangvar
