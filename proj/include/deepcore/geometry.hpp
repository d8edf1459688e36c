// Point-cloud containers and the geometric primitives underneath the depth
// computations: centering, general-position checks, deterministic
// perturbation, hyperplane projections, and sign vectors.
#ifndef DEEPCORE_GEOMETRY_HPP
#define DEEPCORE_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deepcore/cone_code.hpp"
#include "deepcore/types.hpp"

namespace deepcore {

// Relative tolerance used to decide whether a projection is zero, whether a
// pivot vanished, and similar sign questions. Always multiplied by a scale
// taken from the data.
inline constexpr double kRelativeTol = 1e-12;

// A sample of n points in R^d, one point per row. Validated on construction:
// at least one point, at least one coordinate, every entry finite.
class PointCloud {
 public:
  explicit PointCloud(Matrix points);

  Index size() const { return points_.rows(); }
  Index dimension() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  Vector point(Index i) const { return points_.row(i).transpose(); }

 private:
  Matrix points_;
};

// The sample translated so the query point sits at the origin.
struct CenteredCloud {
  Matrix points;          // row i = x_i - z
  Vector query;           // the original z
  double scale = 0.0;     // max row norm of the centered points
  bool hasPointAtOrigin = false;  // some x_i coincides with z numerically

  Index size() const { return points.rows(); }
  Index dimension() const { return points.cols(); }
};

// A unit vector in R^d. The constructor rejects vectors whose norm is not 1
// within kRelativeTol.
class Direction {
 public:
  explicit Direction(Vector v);

  const Vector& vec() const { return vec_; }
  Index dimension() const { return vec_.size(); }

 private:
  Vector vec_;
};

enum class GeneralPositionMode { Exhaustive, Sampled };

struct GeneralPositionReport {
  bool ok = true;
  // Indices (into the cloud) of one rank-deficient subset, when found.
  std::optional<std::vector<Index>> violation;
  std::string note;
};

// Per-anchor-point projection state reused across the cone search. Rows of
// `projected` are kept sign-aligned with `signState`: row i equals
// (signState(i) ? +1 : -1) * (x_i' * basis), and the anchor row is zero.
struct PlaneCache {
  Index anchor = -1;
  Matrix basis;       // d x (d-1), orthonormal, orthogonal to the anchor point
  Matrix projected;   // n x (d-1)
  ConeCode signState;
  // Indices of the hull certificate from the last in-hull test, if any,
  // together with the rows whose sign changed since it was stored. The
  // certificate stays binding while the two sets are disjoint.
  std::optional<std::vector<Index>> hullBasis;
  std::vector<Index> flippedSinceBasis;
};

// --- construction -----------------------------------------------------------

// Translates the cloud so `query` is the origin. Throws DimensionError when
// the query length does not match the cloud dimension.
CenteredCloud center(const PointCloud& cloud, const Vector& query);

// Indices of centered rows that are numerically the origin, i.e. sample
// points coinciding with the query (same criterion center() uses for
// hasPointAtOrigin). Such rows satisfy 0 . r >= 0 for every direction, so a
// depth driver can drop them from the minimization and add their number back
// to the count afterwards.
std::vector<Index> originRows(const CenteredCloud& centered);

// The centered cloud with the given rows removed; `rows` must be sorted
// ascending. Scale and the origin flag are recomputed over the survivors.
CenteredCloud dropRows(const CenteredCloud& centered,
                       const std::vector<Index>& rows);

// Widens a code over the surviving rows back to the full indexing, setting
// the bit of every dropped row (dropped origin rows are always counted).
// `dropped` must be sorted ascending and `keptCode` must cover exactly the
// rows that were not dropped.
ConeCode expandCode(const ConeCode& keptCode, const std::vector<Index>& dropped,
                    Index fullSize);

// Adds independent uniform jitter in [-magnitude, magnitude] per coordinate,
// scaled by the bounding-box diagonal. The jitter stream of a point depends
// only on its coordinates (and on how many identical points precede it), not
// on its row index, so reordering the cloud reorders the output rows without
// changing them. Magnitudes below 1e-12 are raised to 1e-12.
PointCloud perturb(const PointCloud& cloud, double magnitude,
                   std::uint64_t seed);

// --- rank machinery ---------------------------------------------------------

// Rank of `m` by Gaussian elimination with partial pivoting; entries whose
// magnitude is at most pivotTol are treated as zero.
Index eliminationRank(Matrix m, double pivotTol);

// A unit vector spanning the nullspace of a k x d matrix with k < d and full
// row rank k (the generic case this library feeds it). Deterministic,
// including the sign. Throws DegeneracyError when the rows are dependent or
// the nullspace has dimension greater than one among the tracked columns.
Vector nullspaceDirection(const Matrix& rows, double pivotTol);

// Checks that every min(n, d)-subset of the centered points is linearly
// independent. Exhaustive mode enumerates all subsets; Sampled mode tests
// `samples` random subsets drawn from `seed`.
GeneralPositionReport checkGeneralPosition(const Matrix& centered,
                                           double scale,
                                           GeneralPositionMode mode,
                                           std::uint64_t seed = 0,
                                           Index samples = 2000);

// Mode picked automatically: exhaustive while C(n, min(n,d)) <= 200000.
GeneralPositionReport checkGeneralPosition(const Matrix& centered,
                                           double scale,
                                           std::uint64_t seed = 0);

// --- projections and signs --------------------------------------------------

// Orthonormal basis of the hyperplane orthogonal to `anchor` (nonzero),
// returned as the d x (d-1) trailing columns of a Householder reflection.
// Deterministic in the anchor.
Matrix planeBasis(const Vector& anchor);

// Sign pattern of the centered points along direction r: bit i is set when
// x_i . r > 0. Throws ZeroProjectionError when some |x_i . r| falls below
// kRelativeTol * scale.
ConeCode signVector(const Matrix& centered, const Vector& r, double scale);

// Projection cache for `anchor`, with rows aligned to `code`.
PlaneCache makePlaneCache(const Matrix& centered, Index anchor,
                          const ConeCode& code);

// Draws unit directions from `seed` until one induces a clean sign vector.
// Returns the direction and its cone code. Throws ExhaustedRetriesError
// after maxTries failures.
std::pair<Direction, ConeCode> initialDirection(const CenteredCloud& cloud,
                                                std::uint64_t seed,
                                                int maxTries = 64);

}  // namespace deepcore

#endif  // DEEPCORE_GEOMETRY_HPP
