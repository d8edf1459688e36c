// Deterministic random numbers. All floating-point draws go through explicit
// integer-to-double conversions so results are identical across platforms
// and standard-library implementations.
#ifndef DEEPCORE_RNG_HPP
#define DEEPCORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "deepcore/types.hpp"

namespace deepcore {

// Derives an independent stream seed from a base seed and a salt.
// Mixing follows the splitmix64 finalizer so nearby salts decorrelate.
inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t nextUint64() { return engine_(); }

  // Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Box-Muller transform; 1 - u keeps the log
  // argument strictly positive.
  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform direction on the unit sphere in d dimensions.
  Vector sphereDirection(Index d) {
    Vector v(d);
    double norm2 = 0.0;
    do {
      for (Index i = 0; i < d; ++i) v[i] = gaussian();
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-300);
    return v / std::sqrt(norm2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace deepcore

#endif  // DEEPCORE_RNG_HPP
