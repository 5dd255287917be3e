#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace greenmark {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based keyed generator: output i is a pure function of
// (key, stream, i), so seed partitioning across workers or trials is
// just a matter of handing out distinct streams. Two finalizer rounds
// over the keyed counter give plenty of mixing for statistical use;
// this is not a cryptographic PRF.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : Rng(std::array<std::uint64_t, 4>{seed, 0, 0, 0}, stream) {}

  Rng(const std::array<std::uint64_t, 4>& key, std::uint64_t stream) {
    std::uint64_t acc = 0x6a09e667f3bcc908ULL ^ mix64(stream + 0x9e3779b97f4a7c15ULL);
    for (std::uint64_t w : key) acc = mix64(acc + 0x9e3779b97f4a7c15ULL + w);
    k0_ = acc;
    k1_ = mix64(acc + 0x3c6ef372fe94f82bULL);
  }

  std::uint64_t next_u64() noexcept {
    std::uint64_t c = counter_++;
    return mix64(k0_ + c * 0x9e3779b97f4a7c15ULL) ^ mix64(k1_ ^ c);
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (open-interval u1 keeps the log finite).
  double next_normal() noexcept {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t k0_ = 0;
  std::uint64_t k1_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace greenmark
