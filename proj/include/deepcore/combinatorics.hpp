// Small subset-enumeration utilities shared by the exact oracles and the
// general-position checks.
#ifndef DEEPCORE_COMBINATORICS_HPP
#define DEEPCORE_COMBINATORICS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "deepcore/types.hpp"

namespace deepcore {

// C(n, k) with saturation at the std::uint64_t maximum instead of overflow.
inline std::uint64_t binomialCapped(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (result > cap / factor) return cap;
    result = result * factor / i;
  }
  return result;
}

// Calls f(indices) for every k-subset of {0, ..., n-1} in lexicographic
// order. k == 0 visits the empty subset once.
template <typename F>
void forEachSubset(Index n, Index k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(static_cast<const std::vector<Index>&>(idx));
    Index pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) {
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index i = pos + 1; i < k; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
}

}  // namespace deepcore

#endif  // DEEPCORE_COMBINATORICS_HPP
