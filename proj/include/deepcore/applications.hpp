// Depth-based statistics built on the exact and approximate depth engines:
// whole-sample depth fields, depth-weighted location, a depth-scaled sign
// transform, robust principal axes, and depth-vs-depth classification
// coordinates.
#ifndef DEEPCORE_APPLICATIONS_HPP
#define DEEPCORE_APPLICATIONS_HPP

#include <vector>

#include "deepcore/cone_search.hpp"
#include "deepcore/geometry.hpp"
#include "deepcore/oracles.hpp"
#include "deepcore/types.hpp"

namespace deepcore {

enum class DepthMethod { Exact, Combinatorial, Planar, Approximate };

struct DepthOptions {
  DepthMethod method = DepthMethod::Exact;
  // Seed, perturbation policy, and traversal switches; the seed also drives
  // the approximate method's directions.
  SearchOptions search;
  Index approxDirections = 1000;
};

// Depth of `query` in `cloud` by the selected method, with shared handling
// of centering, the hull-membership precheck, and degeneracy retries.
DepthResult computeDepth(const PointCloud& cloud, const Vector& query,
                         const DepthOptions& options = {});

// Depth of every sample point within its own sample. The point itself stays
// in: rows coinciding with the query lie in every closed halfspace, so each
// point contributes at least itself to its own count.
struct DepthField {
  std::vector<Index> counts;
  Index sampleSize = 0;
  DepthMethod method = DepthMethod::Exact;

  double value(Index i) const {
    return static_cast<double>(counts[static_cast<std::size_t>(i)]) /
           static_cast<double>(sampleSize);
  }
};

DepthField computeDepthField(const PointCloud& cloud,
                             const DepthOptions& options = {});

// Depth-weighted location: sum_i x_i D_i / sum_i D_i, accumulated in a
// fixed sequential order so repeated evaluation is bit-identical.
Vector depthWeightedMean(const PointCloud& cloud, const DepthField& field);

// Unit vectors from the depth-weighted center to each point, scaled by how
// far the point's depth falls short of `dmax`. Points coinciding with the
// center contribute a zero row and are tallied in `degenerate`.
struct RsgnCloud {
  Matrix vectors;
  Vector center;
  double dmax = 0.5;
  Index degenerate = 0;
};

RsgnCloud rsgnTransform(const PointCloud& cloud, const DepthField& field,
                        double dmax = 0.5);

// Principal axes of the depth-scaled sign vectors: deep points count little,
// shallow points much, which mutes outlier leverage. Columns of `axes` are
// unit directions ordered by decreasing singular value, each oriented so its
// largest-magnitude entry is positive.
struct RobustPcaResult {
  Matrix axes;
  Vector singularValues;
  Vector center;
  DepthField field;
  bool rankDeficient = false;
};

RobustPcaResult robustPca(const PointCloud& cloud,
                          const DepthOptions& options = {});

// Depth-vs-depth coordinates for two samples: every point of both samples
// becomes a row (depth in first, depth in second); labels give the sample of
// origin (0 or 1). With excludeOutsiders, rows at exactly (0, 0) are
// dropped.
struct DdPlot {
  Matrix coords;
  std::vector<int> labels;
};

DdPlot ddPlot(const PointCloud& first, const PointCloud& second,
              const DepthOptions& options = {},
              bool excludeOutsiders = false);

}  // namespace deepcore

#endif  // DEEPCORE_APPLICATIONS_HPP
