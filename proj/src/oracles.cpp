#include "deepcore/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "deepcore/combinatorics.hpp"
#include "deepcore/rng.hpp"

namespace deepcore {

namespace {

// Builds the sign code of the halfspace {x : x . w > 0} from precomputed
// strict signs, bypassing tolerance checks the caller already performed.
ConeCode codeFromSigns(const std::vector<bool>& positive) {
  ConeCode code(positive.size());
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (positive[i]) code.set(i, true);
  }
  return code;
}

}  // namespace

DepthResult combinatorialDepth(const CenteredCloud& data) {
  const Index n = data.size();
  const Index d = data.dimension();
  if (n < d) {
    throw DimensionError("subset enumeration needs at least d points");
  }
  const double tol = kRelativeTol * data.scale;
  const Matrix& X = data.points;

  Index best = n + 1;
  std::vector<Index> bestSubset;
  Vector bestNormal;
  double bestOrientation = 1.0;

  forEachSubset(n, d - 1, [&](const std::vector<Index>& subset) {
    Matrix rows(d - 1, d);
    for (Index i = 0; i < d - 1; ++i) {
      rows.row(i) = X.row(subset[static_cast<std::size_t>(i)]);
    }
    Vector normal = nullspaceDirection(rows, tol);

    // Canonical orientation so results do not depend on elimination detail:
    // the largest-magnitude component points up.
    Index argmax = 0;
    normal.cwiseAbs().maxCoeff(&argmax);
    if (normal[argmax] < 0.0) normal = -normal;

    Index pos = 0;
    Index neg = 0;
    for (Index i = 0; i < n; ++i) {
      if (std::find(subset.begin(), subset.end(), i) != subset.end()) {
        continue;
      }
      const double dot = X.row(i).dot(normal);
      if (std::abs(dot) <= tol) {
        throw DegeneracyError(
            "point " + std::to_string(i) +
            " lies on a candidate hyperplane outside its spanning subset");
      }
      (dot > 0.0 ? pos : neg) += 1;
    }
    for (const double orientation : {1.0, -1.0}) {
      const Index count = orientation > 0.0 ? pos : neg;
      if (count < best) {
        best = count;
        bestSubset = subset;
        bestNormal = normal;
        bestOrientation = orientation;
      }
    }
  });

  // Witness: tilt the minimizing normal so the spanning points drop
  // strictly below the hyperplane while no other point changes side.
  Vector witness = bestOrientation * bestNormal;
  std::vector<bool> positive(static_cast<std::size_t>(n), false);
  if (d > 1 && !bestSubset.empty()) {
    Matrix rows(d - 1, d);
    for (Index i = 0; i < d - 1; ++i) {
      rows.row(i) = X.row(bestSubset[static_cast<std::size_t>(i)]);
    }
    const Vector pushDown = rows.completeOrthogonalDecomposition().solve(
        Vector::Constant(d - 1, -1.0));
    double minKeep = std::numeric_limits<double>::infinity();
    double maxShift = 1.0;
    for (Index i = 0; i < n; ++i) {
      if (std::find(bestSubset.begin(), bestSubset.end(), i) !=
          bestSubset.end()) {
        continue;
      }
      minKeep = std::min(minKeep, std::abs(X.row(i).dot(witness)));
      maxShift = std::max(maxShift, std::abs(X.row(i).dot(pushDown)));
    }
    const double step = 0.5 * minKeep / maxShift;
    witness += step * pushDown;
  }
  witness.normalize();
  for (Index i = 0; i < n; ++i) {
    const bool inSubset =
        std::find(bestSubset.begin(), bestSubset.end(), i) != bestSubset.end();
    positive[static_cast<std::size_t>(i)] =
        !inSubset && bestOrientation * X.row(i).dot(bestNormal) > 0.0;
  }

  DepthResult result;
  result.count = best;
  result.sampleSize = n;
  result.minimizingCode = codeFromSigns(positive);
  result.witness = std::move(witness);
  return result;
}

DepthResult univariateDepth(const CenteredCloud& data) {
  if (data.dimension() != 1) {
    throw DimensionError("univariate depth requires one-dimensional data");
  }
  const Index n = data.size();
  const double tol = kRelativeTol * data.scale;

  Index pos = 0;
  Index neg = 0;
  for (Index i = 0; i < n; ++i) {
    const double v = data.points(i, 0);
    if (std::abs(v) <= tol) {
      throw DegeneracyError("point " + std::to_string(i) +
                            " ties with the query");
    }
    (v > 0.0 ? pos : neg) += 1;
  }

  DepthResult result;
  result.count = std::min(pos, neg);
  result.sampleSize = n;
  const double sign = pos <= neg ? 1.0 : -1.0;
  result.witness = Vector::Constant(1, sign);
  std::vector<bool> positive(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    positive[static_cast<std::size_t>(i)] = sign * data.points(i, 0) > 0.0;
  }
  result.minimizingCode = codeFromSigns(positive);
  return result;
}

DepthResult planarDepth(const CenteredCloud& data) {
  if (data.dimension() != 2) {
    throw DimensionError("planar sweep requires two-dimensional data");
  }
  const Index n = data.size();
  const double tol = kRelativeTol * data.scale;
  constexpr double twoPi = 2.0 * std::numbers::pi;

  // Point i is on the positive side of direction (cos a, sin a) exactly for
  // a in (theta_i - pi/2, theta_i + pi/2); entering and leaving are events.
  struct Event {
    double angle;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    const double norm = data.points.row(i).norm();
    if (norm <= tol) {
      throw DegeneracyError("point " + std::to_string(i) +
                            " coincides with the query");
    }
    const double theta = std::atan2(data.points(i, 1), data.points(i, 0));
    auto wrap = [&](double a) {
      while (a < 0.0) a += twoPi;
      while (a >= twoPi) a -= twoPi;
      return a;
    };
    events.push_back({wrap(theta - std::numbers::pi / 2.0), +1});
    events.push_back({wrap(theta + std::numbers::pi / 2.0), -1});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.angle < b.angle; });

  const double minGap = 1e-12;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const std::size_t next = (k + 1) % events.size();
    double gap = events[next].angle - events[k].angle;
    if (next == 0) gap += twoPi;
    if (gap <= minGap) {
      throw DegeneracyError(
          "two event directions coincide; a pair of points is parallel as "
          "seen from the query");
    }
  }

  auto directionAt = [](double angle) {
    Vector r(2);
    r[0] = std::cos(angle);
    r[1] = std::sin(angle);
    return r;
  };
  auto strictCount = [&](const Vector& r) {
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
      const double dot = data.points.row(i).dot(r);
      if (std::abs(dot) <= tol) {
        throw DegeneracyError("sweep direction grazes point " +
                              std::to_string(i));
      }
      if (dot > 0.0) ++count;
    }
    return count;
  };

  // Start in the middle of the first arc and walk all 2n arcs once.
  const double start =
      events[0].angle +
      0.5 * (events[1].angle - events[0].angle);
  Index inside = strictCount(directionAt(start));

  Index best = std::min(inside, n - inside);
  double bestAngle = start;
  bool bestFlip = n - inside < inside;

  Index running = inside;
  for (std::size_t k = 1; k <= events.size(); ++k) {
    const std::size_t at = k % events.size();
    running += events[at].delta;
    const std::size_t next = (at + 1) % events.size();
    double arcEnd = events[next].angle;
    if (next == 0 || arcEnd < events[at].angle) arcEnd += twoPi;
    const double mid = 0.5 * (events[at].angle + arcEnd);
    const Index count = std::min(running, n - running);
    if (count < best) {
      best = count;
      bestAngle = mid;
      bestFlip = n - running < running;
    }
  }
  if (running != inside) {
    throw DegeneracyError("sweep bookkeeping failed to close the circle");
  }

  Vector witness = directionAt(bestAngle);
  if (bestFlip) witness = -witness;
  const Index verify = strictCount(witness);
  if (verify != best) {
    throw DegeneracyError("sweep minimum failed direct verification");
  }

  DepthResult result;
  result.count = best;
  result.sampleSize = n;
  std::vector<bool> positive(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    positive[static_cast<std::size_t>(i)] =
        data.points.row(i).dot(witness) > 0.0;
  }
  result.minimizingCode = codeFromSigns(positive);
  result.witness = std::move(witness);
  return result;
}

namespace {

DepthResult bestOverDirections(const CenteredCloud& data,
                               const Matrix& directions) {
  const Index n = data.size();
  const double tol = kRelativeTol * data.scale;

  Index best = n + 1;
  Vector bestDir;
  for (Index k = 0; k < directions.rows(); ++k) {
    const Vector r = directions.row(k).transpose();
    Index pos = 0;
    Index neg = 0;
    Index zeros = 0;
    for (Index i = 0; i < n; ++i) {
      const double dot = data.points.row(i).dot(r);
      if (std::abs(dot) <= tol) {
        ++zeros;
      } else {
        (dot > 0.0 ? pos : neg) += 1;
      }
    }
    // Boundary points count into the halfspace, keeping this an upper bound.
    const Index count = std::min(pos, neg) + zeros;
    if (count < best) {
      best = count;
      bestDir = pos <= neg ? r : (-r).eval();
    }
  }

  DepthResult result;
  result.count = best;
  result.sampleSize = n;
  if (bestDir.size() > 0) {
    result.witness = std::move(bestDir);
  }
  return result;
}

}  // namespace

DepthResult approximateDepth(const CenteredCloud& data,
                             const ApproxOptions& options) {
  if (options.directions < 1) {
    throw DepthError("direction budget must be at least one");
  }
  SeededRng rng(mixSeed(options.seed, 0x499u));
  Matrix directions(options.directions, data.dimension());
  for (Index k = 0; k < options.directions; ++k) {
    directions.row(k) = rng.sphereDirection(data.dimension()).transpose();
  }
  return bestOverDirections(data, directions);
}

DepthResult approximateDepth(const CenteredCloud& data,
                             const Matrix& directions) {
  if (directions.rows() < 1 || directions.cols() != data.dimension()) {
    throw DimensionError("direction matrix must be K x d with K >= 1");
  }
  return bestOverDirections(data, directions);
}

}  // namespace deepcore
