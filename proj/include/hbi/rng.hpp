#ifndef HBI_RNG_HPP
#define HBI_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace hbi {

// mt19937_64 output is fully specified by the standard. The helpers below
// replace std::uniform_real_distribution and friends, whose sequences differ
// between standard libraries; with these, every seeded result in the project
// is reproducible across toolchains.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Inclusive bounds.
inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Standard normal via Box-Muller; consumes two draws per call.
inline double normal(Rng& rng) {
  double u1 = 1.0 - uniform01(rng);  // (0, 1]
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

/// splitmix64 mix, used to derive independent streams from one base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hbi

#endif
