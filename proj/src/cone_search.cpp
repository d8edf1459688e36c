#include "deepcore/cone_search.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "deepcore/lp.hpp"
#include "deepcore/rng.hpp"

namespace deepcore {

namespace {

// Facet test with explicit control over certificate reuse. The anchor's row
// is zero and excluded; the remaining aligned rows contain the origin in
// their hull exactly when the anchor hyperplane does NOT carry a facet.
bool facetTestImpl(PlaneCache& cache, const ConeCode& code,
                   SearchDiagnostics* diag, bool useCache) {
  alignPlaneCache(cache, code);
  if (useCache && cache.hullBasis.has_value() &&
      basisStillValid(*cache.hullBasis, cache.flippedSinceBasis)) {
    if (diag != nullptr) ++diag->lpCacheHits;
    return false;
  }

  const Index n = cache.projected.rows();
  const Index p = cache.projected.cols();
  Matrix rows(n - 1, p);
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    if (i == cache.anchor) continue;
    rows.row(r++) = cache.projected.row(i);
  }

  if (diag != nullptr) ++diag->lpCalls;
  const FeasibilityOutcome outcome = originInHull(rows);
  if (outcome.kind == Feasibility::InHull) {
    std::vector<Index> pointBasis;
    pointBasis.reserve(outcome.basis.size());
    for (Index rowIdx : outcome.basis) {
      pointBasis.push_back(rowIdx < cache.anchor ? rowIdx : rowIdx + 1);
    }
    cache.hullBasis = std::move(pointBasis);
    cache.flippedSinceBasis.clear();
    return false;
  }
  cache.hullBasis.reset();
  cache.flippedSinceBasis.clear();
  return true;
}

struct TraversalOutcome {
  Index bestCount = 0;
  ConeCode bestCode;
};

// Breadth-first traversal over the cone graph starting from the cone of a
// random clean direction. Returns the smallest halfspace count among the
// visited cones, with the reported code oriented so its set bits are the
// points inside the minimizing halfspace.
TraversalOutcome traverse(const CenteredCloud& data,
                          const SearchOptions& options,
                          SearchDiagnostics& diag, bool confirmedInHull) {
  const Index n = data.size();
  const auto [startDir, startCode] =
      initialDirection(data, options.seed, options.maxDirectionRetries);
  (void)startDir;

  std::vector<PlaneCache> caches;
  caches.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    caches.push_back(makePlaneCache(data.points, j, startCode));
  }

  std::set<ConeCode> seen{startCode};
  std::set<ConeCode> visited;
  std::vector<ConeCode> topical{startCode};
  std::set<ConeCode> frontier;

  Index best = n + 1;
  ConeCode bestCode;
  const Index stopBelow = confirmedInHull ? 1 : 0;
  const Index cap = generationCap(n);
  std::int64_t generation = 0;
  bool stop = false;

  while (!topical.empty() && !stop) {
    ++generation;
    for (const ConeCode& code : topical) {
      ++diag.conesVisited;
      if (visited.contains(code.complemented())) ++diag.mirrorDuplicates;
      visited.insert(code);

      const Index ones = static_cast<Index>(code.countOnes());
      const Index count = std::min(ones, n - ones);
      if (count < best) {
        best = count;
        bestCode = (ones <= n - ones) ? code : code.complemented();
      }
      if (options.earlyExit && best <= stopBelow) {
        stop = true;
        break;
      }
      if (!options.enumerateAll && generation >= cap) continue;

      for (Index j = 0; j < n; ++j) {
        // Pruned mode only expands across hyperplanes not yet crossed since
        // the start; the minimizing cone is reachable that way.
        if (!options.enumerateAll &&
            code.test(static_cast<std::size_t>(j)) !=
                startCode.test(static_cast<std::size_t>(j))) {
          continue;
        }
        PlaneCache& cache = caches[static_cast<std::size_t>(j)];
        bool facet = facetTestImpl(cache, code, &diag,
                                   /*useCache=*/!options.invertFacetTest);
        if (options.invertFacetTest) facet = !facet;
        if (!facet) continue;

        ConeCode child = code.withFlipped(static_cast<std::size_t>(j));
        if (seen.insert(child).second) {
          if (options.onEnqueue) options.onEnqueue(code, child);
          frontier.insert(std::move(child));
        }
      }
    }
    topical.assign(frontier.begin(), frontier.end());
    frontier.clear();
  }

  diag.generations = generation;
  return {best, bestCode};
}

DepthResult runSearch(const CenteredCloud& data, const SearchOptions& options,
                      SearchDiagnostics& diag, bool confirmedInHull) {
  const TraversalOutcome outcome =
      traverse(data, options, diag, confirmedInHull);

  DepthResult result;
  result.count = outcome.bestCount;
  result.sampleSize = data.size();
  result.minimizingCode = outcome.bestCode;
  result.witness =
      interiorDirection(data.points, outcome.bestCode, &diag);
  result.diagnostics = diag;
  return result;
}

// Exact treatment when sample points coincide with the query: their centered
// rows are the origin and lie in every closed halfspace, so the search runs
// on the remaining rows and the coincident ones are added back to the count.
// Throws DegeneracyError when the survivors are too few or degenerate; the
// caller falls back to perturbation in that case.
DepthResult searchWithOriginRows(const CenteredCloud& base,
                                 const SearchOptions& options,
                                 SearchDiagnostics& diag) {
  const Index n = base.size();
  const Index d = base.dimension();
  const std::vector<Index> zeros = originRows(base);
  const Index atQuery = static_cast<Index>(zeros.size());
  const Index kept = n - atQuery;

  if (kept == 0) {
    // Every sample point sits on the query; every direction counts all n.
    DepthResult result;
    result.count = n;
    result.sampleSize = n;
    result.minimizingCode = expandCode(ConeCode(0), zeros, n);
    result.witness = Vector::Unit(d, 0);
    result.diagnostics = diag;
    return result;
  }

  const CenteredCloud reduced = dropRows(base, zeros);

  ++diag.lpCalls;
  const FeasibilityOutcome pre = originInHull(reduced.points);
  if (pre.kind == Feasibility::NotInHull) {
    // Some halfspace excludes every remaining point, so only the coincident
    // ones are counted.
    DepthResult result;
    result.count = atQuery;
    result.sampleSize = n;
    result.minimizingCode =
        expandCode(ConeCode(static_cast<std::size_t>(kept)), zeros, n);
    result.witness = -(*pre.witness);
    result.diagnostics = diag;
    return result;
  }

  if (kept <= d) {
    throw DegeneracyError(
        "points coinciding with the query leave too few distinct points to "
        "search");
  }

  const GeneralPositionReport gp = checkGeneralPosition(
      reduced.points, reduced.scale, mixSeed(options.seed, 0x69e0u));
  if (!gp.ok) {
    throw DegeneracyError("sample is degenerate for this query (" + gp.note +
                          ")");
  }

  DepthResult result =
      runSearch(reduced, options, diag, /*confirmedInHull=*/true);
  result.count += atQuery;
  result.sampleSize = n;
  result.minimizingCode = expandCode(result.minimizingCode, zeros, n);
  return result;
}

}  // namespace

std::vector<Index> alignPlaneCache(PlaneCache& cache, const ConeCode& target) {
  std::vector<Index> flipped;
  cache.signState.forEachDifference(target, [&](std::size_t i) {
    const Index row = static_cast<Index>(i);
    cache.projected.row(row) = -cache.projected.row(row);
    flipped.push_back(row);
    cache.flippedSinceBasis.push_back(row);
  });
  cache.signState = target;
  return flipped;
}

bool coneFacetTest(PlaneCache& cache, const ConeCode& code,
                   SearchDiagnostics* diag) {
  return facetTestImpl(cache, code, diag, /*useCache=*/true);
}

bool coneFacetTest(const Matrix& centered, Index anchor,
                   const ConeCode& code) {
  PlaneCache cache = makePlaneCache(centered, anchor, code);
  return facetTestImpl(cache, code, nullptr, /*useCache=*/false);
}

Vector interiorDirection(const Matrix& centered, const ConeCode& code,
                         SearchDiagnostics* diag) {
  const Index n = centered.rows();
  const Index d = centered.cols();
  if (static_cast<Index>(code.size()) != n) {
    throw DimensionError("cone code length does not match the sample size");
  }

  // By the theorem of the alternative, some v has s_i * (x_i . v) > 0 for
  // every i exactly when the origin lies outside the convex hull of the
  // sign-adjusted rows s_i * x_i, and the strict separator certifying that
  // is such a v. Solving the hull question keeps the simplex on a bounded
  // (convex-weight) region, so even hair-thin cones resolve without the
  // tableau blowing up; rows are normalized so the conditioning does not
  // depend on how close individual points sit to the query.
  Matrix rows(n, d);
  for (Index i = 0; i < n; ++i) {
    const double rowNorm = centered.row(i).norm();
    if (rowNorm <= 1e-30) {
      throw UnrealizableConeError(
          "a point coincides with the query; no sign pattern is realizable");
    }
    const double sign = code.test(static_cast<std::size_t>(i)) ? 1.0 : -1.0;
    rows.row(i) = (sign / rowNorm) * centered.row(i);
  }

  if (diag != nullptr) ++diag->lpCalls;
  const FeasibilityOutcome outcome = originInHull(rows);
  if (outcome.kind == Feasibility::InHull) {
    throw UnrealizableConeError("no direction induces the requested sign "
                                "pattern");
  }

  Vector v = *outcome.witness;
  const double norm = v.norm();
  if (!(norm > 0.0)) {
    throw UnrealizableConeError("interior direction collapsed to zero");
  }
  v /= norm;
  for (Index i = 0; i < n; ++i) {
    const double dot = centered.row(i).dot(v);
    const bool positive = code.test(static_cast<std::size_t>(i));
    if (!(positive ? dot > 0.0 : dot < 0.0)) {
      throw UnrealizableConeError(
          "candidate interior direction fails the sign pattern at point " +
          std::to_string(i));
    }
  }
  return v;
}

DepthResult tukeyDepth(const PointCloud& cloud, const Vector& query,
                       const SearchOptions& options) {
  const Index n = cloud.size();
  const Index d = cloud.dimension();
  if (query.size() != d) {
    throw DimensionError("query has " + std::to_string(query.size()) +
                         " coordinates, data has " + std::to_string(d));
  }
  if (n <= d) {
    throw DimensionError("need more sample points than dimensions (" +
                         std::to_string(n) + " points in dimension " +
                         std::to_string(d) + ")");
  }

  SearchDiagnostics diag{};
  const CenteredCloud base = center(cloud, query);

  bool confirmedInHull = false;
  if (!options.skipHullPrecheck && !base.hasPointAtOrigin) {
    try {
      ++diag.lpCalls;
      const FeasibilityOutcome pre = originInHull(base.points);
      if (pre.kind == Feasibility::NotInHull) {
        DepthResult result;
        result.count = 0;
        result.sampleSize = n;
        result.minimizingCode = ConeCode(static_cast<std::size_t>(n));
        result.witness = -(*pre.witness);
        result.diagnostics = diag;
        return result;
      }
      confirmedInHull = true;
    } catch (const NumericallyAmbiguousError&) {
      // Membership is borderline; the traversal decides on (possibly
      // perturbed) data instead.
    }
  }

  std::string lastFailure = "no attempt made";
  for (int attempt = 0; attempt <= options.maxRetries; ++attempt) {
    try {
      CenteredCloud data;
      if (attempt == 0) {
        if (base.hasPointAtOrigin) {
          diag.perturbRetries = 0;
          return searchWithOriginRows(base, options, diag);
        }
        data = base;
      } else {
        const PointCloud jittered =
            perturb(cloud, options.perturbMagnitude,
                    mixSeed(options.seed, static_cast<std::uint64_t>(attempt)));
        data = center(jittered, query);
        if (data.hasPointAtOrigin) {
          throw DegeneracyError("perturbation left a point on the query");
        }
      }
      const GeneralPositionReport gp = checkGeneralPosition(
          data.points, data.scale, mixSeed(options.seed, 0x69e0u));
      if (!gp.ok) {
        throw DegeneracyError("sample is degenerate for this query (" +
                              gp.note + ")");
      }
      diag.perturbRetries = attempt;
      return runSearch(data, options, diag, confirmedInHull);
    } catch (const DimensionError&) {
      throw;
    } catch (const DepthError& error) {
      lastFailure = error.what();
    }
  }
  throw DegeneracyError("exact depth failed after " +
                        std::to_string(options.maxRetries) +
                        " perturbation retries; last failure: " + lastFailure);
}

}  // namespace deepcore
