// Exact halfspace depth by breadth-first traversal of the direction cones
// induced by the centered sample. Cones are identified by their sign codes;
// neighbors are discovered through facet tests that reduce to origin-in-hull
// feasibility problems on hyperplane projections.
#ifndef DEEPCORE_CONE_SEARCH_HPP
#define DEEPCORE_CONE_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "deepcore/geometry.hpp"
#include "deepcore/types.hpp"

namespace deepcore {

struct SearchOptions {
  std::uint64_t seed = 0;
  // Relative jitter applied when the sample is degenerate for the query
  // (rank-deficient subsets, ties); the depth is then exact for the jittered
  // sample. Points coinciding with the query are handled exactly, without
  // jitter, unless too few distinct points remain.
  double perturbMagnitude = 1e-7;
  // Perturbation attempts after the pristine try; 0 disables perturbation.
  int maxRetries = 5;
  // Draws allowed when hunting for a starting direction.
  int maxDirectionRetries = 64;
  // Skip the convex-hull membership precheck (the traversal still finds
  // depth zero, only slower and with a synthetic witness).
  bool skipHullPrecheck = false;
  // Visit every cone of the arrangement instead of pruning; used to audit
  // the traversal against the closed-form cell count.
  bool enumerateAll = false;
  // Stop as soon as the running minimum cannot improve.
  bool earlyExit = false;
  // Fault injection for self-checks: invert every facet verdict.
  bool invertFacetTest = false;
  // Observer invoked as (parent, child) whenever a cone is first enqueued.
  std::function<void(const ConeCode&, const ConeCode&)> onEnqueue;
};

// Largest number of traversal generations the search can need for a sample
// of n points: floor((n + 2) / 2).
inline Index generationCap(Index n) { return (n + 2) / 2; }

// Exact depth of `query` within `cloud` (count of sample points in the
// minimizing closed halfspace, over the sample size). Throws DimensionError
// unless cloud.size() > cloud.dimension() >= 1, and DegeneracyError when
// degeneracies persist through all perturbation retries.
DepthResult tukeyDepth(const PointCloud& cloud, const Vector& query,
                       const SearchOptions& options = {});

// Re-aligns the cache rows with `target`, returning the indices whose rows
// changed sign. Bookkeeping for the cached hull certificate is updated.
std::vector<Index> alignPlaneCache(PlaneCache& cache, const ConeCode& target);

// Aligns the cache to `code` and reports whether the anchor's hyperplane
// carries a facet of that cone, i.e. whether flipping the anchor's bit
// reaches an adjacent cone. Uses and refreshes the cached hull certificate.
bool coneFacetTest(PlaneCache& cache, const ConeCode& code,
                   SearchDiagnostics* diag = nullptr);

// One-shot variant building a fresh cache for `anchor`.
bool coneFacetTest(const Matrix& centered, Index anchor, const ConeCode& code);

// A unit direction strictly inside the cone labelled `code`: the strict
// separator certifying that the origin is outside the hull of the
// sign-adjusted unit rows. Throws UnrealizableConeError when no direction
// induces that sign pattern.
Vector interiorDirection(const Matrix& centered, const ConeCode& code,
                         SearchDiagnostics* diag = nullptr);

}  // namespace deepcore

#endif  // DEEPCORE_CONE_SEARCH_HPP
