// Independent depth procedures used to cross-check the cone traversal and to
// serve low-dimensional or approximate queries: subset enumeration over
// hyperplane normals, the sorted univariate rule, a planar angular sweep,
// and a random-direction upper bound.
#ifndef DEEPCORE_ORACLES_HPP
#define DEEPCORE_ORACLES_HPP

#include <cstdint>

#include "deepcore/geometry.hpp"
#include "deepcore/types.hpp"

namespace deepcore {

// Exact depth of the origin by enumerating all (d-1)-point subsets: each
// subset spans a hyperplane whose normal is a candidate minimizer, and under
// general position the minimum over subsets and orientations is the depth.
// Throws DegeneracyError when a projection tie makes a count ambiguous.
DepthResult combinatorialDepth(const CenteredCloud& data);

// Exact depth on the line (d == 1): the smaller of the counts strictly left
// and strictly right of the origin. A value at the origin throws
// DegeneracyError.
DepthResult univariateDepth(const CenteredCloud& data);

// Exact depth in the plane (d == 2) by sweeping a direction around the
// circle and updating the halfspace count at each boundary-crossing event.
// O(n log n). Coincident events (parallel points) throw DegeneracyError.
DepthResult planarDepth(const CenteredCloud& data);

struct ApproxOptions {
  Index directions = 1000;
  std::uint64_t seed = 0;
};

// Upper bound on the depth from random directions. Projection ties are
// counted into the halfspace, so the bound never drops below the exact
// depth. Extending the direction budget with the same seed replays the same
// prefix, so the bound is monotone in `directions`.
DepthResult approximateDepth(const CenteredCloud& data,
                             const ApproxOptions& options);

// Same bound over an explicit set of directions (one per row).
DepthResult approximateDepth(const CenteredCloud& data,
                             const Matrix& directions);

}  // namespace deepcore

#endif  // DEEPCORE_ORACLES_HPP
