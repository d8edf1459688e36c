#include "deepcore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "deepcore/combinatorics.hpp"
#include "deepcore/rng.hpp"

namespace deepcore {

namespace {

// FNV-1a over the raw bytes of a point's coordinates. Exact duplicates (and
// only those) share a hash by construction; accidental collisions merely
// merge two jitter streams' occurrence counters, which stays deterministic.
std::uint64_t hashCoordinates(const Matrix& points, Index row) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (Index j = 0; j < points.cols(); ++j) {
    const double value = points(row, j);
    std::uint64_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

GeneralPositionReport violationReport(std::vector<Index> subset,
                                      std::string note) {
  GeneralPositionReport report;
  report.ok = false;
  report.violation = std::move(subset);
  report.note = std::move(note);
  return report;
}

}  // namespace

PointCloud::PointCloud(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw DimensionError("point cloud needs at least one point and one "
                         "coordinate");
  }
  if (!points_.allFinite()) {
    throw ParseError("point cloud contains a non-finite coordinate");
  }
}

CenteredCloud center(const PointCloud& cloud, const Vector& query) {
  if (query.size() != cloud.dimension()) {
    throw DimensionError("query has " + std::to_string(query.size()) +
                         " coordinates, data has " +
                         std::to_string(cloud.dimension()));
  }
  CenteredCloud out;
  out.points = cloud.points().rowwise() - query.transpose();
  out.query = query;
  out.scale = out.points.rowwise().norm().maxCoeff();
  const double originTol = kRelativeTol * std::max(1.0, out.scale);
  out.hasPointAtOrigin =
      out.points.rowwise().norm().minCoeff() <= originTol;
  return out;
}

std::vector<Index> originRows(const CenteredCloud& centered) {
  const double originTol = kRelativeTol * std::max(1.0, centered.scale);
  std::vector<Index> rows;
  for (Index i = 0; i < centered.size(); ++i) {
    if (centered.points.row(i).norm() <= originTol) rows.push_back(i);
  }
  return rows;
}

CenteredCloud dropRows(const CenteredCloud& centered,
                       const std::vector<Index>& rows) {
  CenteredCloud out;
  out.query = centered.query;
  const Index kept = centered.size() - static_cast<Index>(rows.size());
  out.points.resize(kept, centered.dimension());
  std::size_t cursor = 0;
  Index write = 0;
  for (Index i = 0; i < centered.size(); ++i) {
    if (cursor < rows.size() && rows[cursor] == i) {
      ++cursor;
      continue;
    }
    out.points.row(write++) = centered.points.row(i);
  }
  if (kept > 0) {
    out.scale = out.points.rowwise().norm().maxCoeff();
    const double originTol = kRelativeTol * std::max(1.0, out.scale);
    out.hasPointAtOrigin = out.points.rowwise().norm().minCoeff() <= originTol;
  }
  return out;
}

ConeCode expandCode(const ConeCode& keptCode, const std::vector<Index>& dropped,
                    Index fullSize) {
  if (static_cast<Index>(keptCode.size() + dropped.size()) != fullSize) {
    throw DimensionError("code length plus dropped rows must equal the full "
                         "sample size");
  }
  ConeCode full(static_cast<std::size_t>(fullSize));
  std::size_t cursor = 0;
  std::size_t keptBit = 0;
  for (Index i = 0; i < fullSize; ++i) {
    if (cursor < dropped.size() && dropped[cursor] == i) {
      full.set(static_cast<std::size_t>(i), true);
      ++cursor;
    } else {
      full.set(static_cast<std::size_t>(i), keptCode.test(keptBit++));
    }
  }
  return full;
}

PointCloud perturb(const PointCloud& cloud, double magnitude,
                   std::uint64_t seed) {
  const Index n = cloud.size();
  const Index d = cloud.dimension();
  magnitude = std::max(magnitude, 1e-12);

  double extent = (cloud.points().colwise().maxCoeff() -
                   cloud.points().colwise().minCoeff())
                      .norm();
  if (extent <= 0.0) {
    extent = std::max(1.0, cloud.points().row(0).norm());
  }
  const double amplitude = magnitude * extent;

  Matrix jittered = cloud.points();
  std::unordered_map<std::uint64_t, std::uint64_t> occurrences;
  for (Index i = 0; i < n; ++i) {
    const std::uint64_t coordHash = hashCoordinates(cloud.points(), i);
    const std::uint64_t occurrence = occurrences[coordHash]++;
    SeededRng rng(mixSeed(mixSeed(seed, coordHash), occurrence));
    for (Index j = 0; j < d; ++j) {
      jittered(i, j) += rng.uniform(-amplitude, amplitude);
    }
  }
  return PointCloud(std::move(jittered));
}

Direction::Direction(Vector v) : vec_(std::move(v)) {
  if (vec_.size() < 1) {
    throw DimensionError("direction needs at least one coordinate");
  }
  if (std::abs(vec_.norm() - 1.0) > kRelativeTol) {
    throw DepthError("direction is not unit length");
  }
}

Index eliminationRank(Matrix m, double pivotTol) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  Index rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index pivotRow = rank;
    double best = std::abs(m(rank, c));
    for (Index r = rank + 1; r < rows; ++r) {
      if (std::abs(m(r, c)) > best) {
        best = std::abs(m(r, c));
        pivotRow = r;
      }
    }
    if (best <= pivotTol) continue;
    if (pivotRow != rank) m.row(pivotRow).swap(m.row(rank));
    for (Index r = rank + 1; r < rows; ++r) {
      m.row(r) -= (m(r, c) / m(rank, c)) * m.row(rank);
    }
    ++rank;
  }
  return rank;
}

Vector nullspaceDirection(const Matrix& rows, double pivotTol) {
  const Index k = rows.rows();
  const Index d = rows.cols();
  if (k >= d) {
    throw DegeneracyError("nullspace direction requires fewer rows than "
                          "columns");
  }
  if (k == 0) {
    Vector e = Vector::Zero(d);
    e[0] = 1.0;
    return e;
  }

  Matrix m = rows;
  std::vector<Index> pivotCol;
  pivotCol.reserve(static_cast<std::size_t>(k));
  Index rank = 0;
  for (Index c = 0; c < d && rank < k; ++c) {
    Index pivotRow = rank;
    double best = std::abs(m(rank, c));
    for (Index r = rank + 1; r < k; ++r) {
      if (std::abs(m(r, c)) > best) {
        best = std::abs(m(r, c));
        pivotRow = r;
      }
    }
    if (best <= pivotTol) continue;
    if (pivotRow != rank) m.row(pivotRow).swap(m.row(rank));
    for (Index r = rank + 1; r < k; ++r) {
      m.row(r) -= (m(r, c) / m(rank, c)) * m.row(rank);
    }
    pivotCol.push_back(c);
    ++rank;
  }
  if (rank < k) {
    throw DegeneracyError("rows are linearly dependent; nullspace direction "
                          "is not unique");
  }

  Index freeCol = 0;
  while (freeCol < d &&
         std::find(pivotCol.begin(), pivotCol.end(), freeCol) !=
             pivotCol.end()) {
    ++freeCol;
  }

  Vector x = Vector::Zero(d);
  x[freeCol] = 1.0;
  for (Index i = rank - 1; i >= 0; --i) {
    const double s = m.row(i).dot(x);
    x[pivotCol[static_cast<std::size_t>(i)]] =
        -s / m(i, pivotCol[static_cast<std::size_t>(i)]);
  }
  return x / x.norm();
}

GeneralPositionReport checkGeneralPosition(const Matrix& centered,
                                           double scale,
                                           GeneralPositionMode mode,
                                           std::uint64_t seed,
                                           Index samples) {
  const Index n = centered.rows();
  const Index d = centered.cols();
  const Index k = std::min(n, d);
  const double pivotTol = kRelativeTol * scale;

  if (scale <= 0.0) {
    return violationReport({0}, "all points coincide with the query");
  }

  GeneralPositionReport report;
  Matrix subsetRows(k, d);
  const auto testSubset = [&](const std::vector<Index>& subset) {
    for (Index i = 0; i < k; ++i) {
      subsetRows.row(i) = centered.row(subset[static_cast<std::size_t>(i)]);
    }
    return eliminationRank(subsetRows, pivotTol) == k;
  };

  if (mode == GeneralPositionMode::Exhaustive) {
    bool done = false;
    forEachSubset(n, k, [&](const std::vector<Index>& subset) {
      if (done || testSubset(subset)) return;
      report = violationReport(subset, "rank-deficient subset");
      done = true;
    });
    if (report.ok) report.note = "exhaustive";
    return report;
  }

  SeededRng rng(mixSeed(seed, 0x6b5u));
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<Index> subset(static_cast<std::size_t>(k));
  for (Index trial = 0; trial < samples; ++trial) {
    for (Index j = 0; j < k; ++j) {
      const Index pick =
          j + static_cast<Index>(rng.nextUint64() %
                                 static_cast<std::uint64_t>(n - j));
      std::swap(pool[static_cast<std::size_t>(j)],
                pool[static_cast<std::size_t>(pick)]);
      subset[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(j)];
    }
    std::sort(subset.begin(), subset.end());
    if (!testSubset(subset)) {
      return violationReport(subset, "rank-deficient subset (sampled)");
    }
  }
  report.note = "sampled " + std::to_string(samples) + " subsets";
  return report;
}

GeneralPositionReport checkGeneralPosition(const Matrix& centered,
                                           double scale,
                                           std::uint64_t seed) {
  const Index n = centered.rows();
  const Index k = std::min(n, centered.cols());
  const bool exhaustive =
      binomialCapped(static_cast<std::uint64_t>(n),
                     static_cast<std::uint64_t>(k)) <= 200000ull;
  return checkGeneralPosition(centered, scale,
                              exhaustive ? GeneralPositionMode::Exhaustive
                                         : GeneralPositionMode::Sampled,
                              seed);
}

Matrix planeBasis(const Vector& anchor) {
  const Index d = anchor.size();
  const double norm = anchor.norm();
  if (!(norm > 0.0)) {
    throw DegeneracyError("cannot build a plane basis for the zero vector");
  }
  // Householder reflection mapping e1 onto -sign(u0) * u; its trailing
  // columns form an orthonormal basis of the hyperplane orthogonal to u.
  Vector v = anchor / norm;
  v[0] += (v[0] >= 0.0 ? 1.0 : -1.0);
  const double vtv = v.squaredNorm();
  Matrix basis(d, d - 1);
  for (Index c = 1; c < d; ++c) {
    Vector col = (-2.0 * v[c] / vtv) * v;
    col[c] += 1.0;
    basis.col(c - 1) = col;
  }
  return basis;
}

ConeCode signVector(const Matrix& centered, const Vector& r, double scale) {
  const Index n = centered.rows();
  const double tol = kRelativeTol * scale;
  ConeCode code(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double dot = centered.row(i).dot(r.transpose());
    if (std::abs(dot) <= tol) {
      throw ZeroProjectionError(i);
    }
    if (dot > 0.0) code.set(static_cast<std::size_t>(i), true);
  }
  return code;
}

PlaneCache makePlaneCache(const Matrix& centered, Index anchor,
                          const ConeCode& code) {
  PlaneCache cache;
  cache.anchor = anchor;
  cache.basis = planeBasis(centered.row(anchor).transpose());
  cache.projected = centered * cache.basis;
  for (Index i = 0; i < centered.rows(); ++i) {
    if (!code.test(static_cast<std::size_t>(i))) {
      cache.projected.row(i) = -cache.projected.row(i);
    }
  }
  cache.projected.row(anchor).setZero();
  cache.signState = code;
  return cache;
}

std::pair<Direction, ConeCode> initialDirection(const CenteredCloud& cloud,
                                                std::uint64_t seed,
                                                int maxTries) {
  SeededRng rng(mixSeed(seed, 0x1d1u));
  for (int attempt = 0; attempt < maxTries; ++attempt) {
    Vector candidate = rng.sphereDirection(cloud.dimension());
    try {
      ConeCode code = signVector(cloud.points, candidate, cloud.scale);
      return {Direction(std::move(candidate)), std::move(code)};
    } catch (const ZeroProjectionError&) {
      continue;
    }
  }
  throw ExhaustedRetriesError("no starting direction with nonzero "
                              "projections after " +
                              std::to_string(maxTries) + " draws");
}

}  // namespace deepcore
