#pragma once

#include <cstdint>
#include <random>

namespace wmsn {

// Seeded random stream. Wraps mt19937_64 but derives uniform doubles from the
// raw bits directly, so a given seed yields the same draw sequence on every
// platform (std::uniform_real_distribution makes no such promise).
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

private:
  std::mt19937_64 eng_;
};

// Deterministic sub-seed derivation (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace wmsn
