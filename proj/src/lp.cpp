#include "deepcore/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace deepcore {

namespace {

// Solves for convex weights supported on `support` and verifies them against
// the full row set. Returns the verified outcome or nullopt.
std::optional<FeasibilityOutcome> certifyInHull(
    const Matrix& rows, const std::vector<Index>& support, double tolerance) {
  const Index m = rows.rows();
  const Index p = rows.cols();
  const Index k = static_cast<Index>(support.size());
  if (k == 0) return std::nullopt;
  for (Index idx : support) {
    if (idx < 0 || idx >= m) return std::nullopt;
  }

  // [rows_S' ; 1'] lambda = (0, ..., 0, 1)
  Matrix system(p + 1, k);
  for (Index c = 0; c < k; ++c) {
    system.col(c).head(p) =
        rows.row(support[static_cast<std::size_t>(c)]).transpose();
    system(p, c) = 1.0;
  }
  Vector rhs = Vector::Zero(p + 1);
  rhs[p] = 1.0;
  Vector lambda = system.colPivHouseholderQr().solve(rhs);

  if (lambda.minCoeff() < -1e-10) return std::nullopt;
  lambda = lambda.cwiseMax(0.0);
  const double sum = lambda.sum();
  if (std::abs(sum - 1.0) > 1e-6) return std::nullopt;
  lambda /= sum;

  Vector weights = Vector::Zero(m);
  for (Index c = 0; c < k; ++c) {
    weights[support[static_cast<std::size_t>(c)]] = lambda[c];
  }
  const double residual =
      p > 0 ? (rows.transpose() * weights).cwiseAbs().maxCoeff() : 0.0;
  if (residual > tolerance) {
    return std::nullopt;
  }

  FeasibilityOutcome outcome;
  outcome.kind = Feasibility::InHull;
  outcome.weights = std::move(weights);
  for (Index c = 0; c < k; ++c) {
    if (lambda[c] > 1e-12) {
      outcome.basis.push_back(support[static_cast<std::size_t>(c)]);
    }
  }
  outcome.tolerance = tolerance;
  return outcome;
}

}  // namespace

PhaseOneResult phaseOneSimplex(const Matrix& A, const Vector& b,
                               const SimplexSettings& settings) {
  const Index k = A.rows();
  const Index m = A.cols();
  if (b.size() != k) {
    throw DimensionError("phase-1: right-hand side length mismatch");
  }
  if (k > 0 && b.minCoeff() < 0.0) {
    throw DepthError("phase-1 requires a nonnegative right-hand side");
  }

  const Index total = m + k;
  Matrix T = Matrix::Zero(k + 1, total + 1);
  if (m > 0) T.topLeftCorner(k, m) = A;
  T.block(0, m, k, k).setIdentity();
  T.col(total).head(k) = b;
  // Reduced costs with the all-artificial basis (each artificial costs 1).
  for (Index j = 0; j < m; ++j) T(k, j) = -A.col(j).sum();
  T(k, total) = -b.sum();

  std::vector<Index> basis(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) basis[static_cast<std::size_t>(i)] = m + i;

  double maxAbs = b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0;
  if (m > 0 && k > 0) maxAbs = std::max(maxAbs, A.cwiseAbs().maxCoeff());
  const double eps = settings.relativePivotTol * (1.0 + maxAbs);

  const std::int64_t blandAfter =
      settings.blandAfter >= 0 ? settings.blandAfter : 3 * (total + 2);
  const std::int64_t maxIterations = settings.maxIterations >= 0
                                         ? settings.maxIterations
                                         : 2000 + 200 * (total + 2);

  std::int64_t iterations = 0;
  while (true) {
    // Entering column; artificial columns never re-enter.
    Index enter = -1;
    if (iterations < blandAfter) {
      double best = -eps;
      for (Index j = 0; j < m; ++j) {
        if (T(k, j) < best) {
          best = T(k, j);
          enter = j;
        }
      }
    } else {
      for (Index j = 0; j < m; ++j) {
        if (T(k, j) < -eps) {
          enter = j;
          break;
        }
      }
    }
    if (enter < 0) break;  // optimal

    if (iterations >= maxIterations) {
      throw IterationLimitError("phase-1 simplex exceeded " +
                                std::to_string(maxIterations) +
                                " iterations");
    }

    // Ratio test; ties resolved toward the smallest basic variable index,
    // which makes the Bland phase cycle-free.
    Index leave = -1;
    double bestRatio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < k; ++i) {
      if (T(i, enter) <= eps) continue;
      const double ratio = T(i, total) / T(i, enter);
      if (leave < 0) {
        leave = i;
        bestRatio = ratio;
        continue;
      }
      const double slack = 1e-12 * (1.0 + std::abs(bestRatio));
      if (ratio < bestRatio - slack) {
        leave = i;
        bestRatio = ratio;
      } else if (ratio <= bestRatio + slack &&
                 basis[static_cast<std::size_t>(i)] <
                     basis[static_cast<std::size_t>(leave)]) {
        leave = i;
        bestRatio = std::min(ratio, bestRatio);
      }
    }
    if (leave < 0) {
      throw NumericallyAmbiguousError(
          "phase-1 simplex found an unbounded ray; the tableau has lost "
          "numerical meaning");
    }

    T.row(leave) /= T(leave, enter);
    for (Index r = 0; r <= k; ++r) {
      if (r == leave) continue;
      const double factor = T(r, enter);
      if (factor != 0.0) T.row(r) -= factor * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    ++iterations;
  }

  PhaseOneResult result;
  result.objective = -T(k, total);
  result.solution = Vector::Zero(m);
  for (Index i = 0; i < k; ++i) {
    if (basis[static_cast<std::size_t>(i)] < m) {
      result.solution[basis[static_cast<std::size_t>(i)]] = T(i, total);
    }
  }
  // Multipliers read off the artificial columns: y_i = cost(1) - reduced.
  result.duals = Vector(k);
  for (Index i = 0; i < k; ++i) result.duals[i] = 1.0 - T(k, m + i);
  result.iterations = iterations;
  return result;
}

FeasibilityOutcome originInHull(const Matrix& rows,
                                const std::vector<Index>* warmStart,
                                double tolerance) {
  const Index m = rows.rows();
  const Index p = rows.cols();

  double maxRowNorm = 0.0;
  for (Index i = 0; i < m; ++i) {
    maxRowNorm = std::max(maxRowNorm, rows.row(i).norm());
  }
  const double feasTol =
      tolerance > 0.0 ? tolerance : 1e-9 * (1.0 + maxRowNorm);

  if (m == 0) {
    FeasibilityOutcome outcome;
    outcome.kind = Feasibility::NotInHull;
    Vector w = Vector::Zero(std::max<Index>(p, 1));
    w[0] = 1.0;
    outcome.witness = std::move(w);
    outcome.tolerance = feasTol;
    return outcome;
  }

  if (warmStart != nullptr && !warmStart->empty()) {
    if (auto cached = certifyInHull(rows, *warmStart, feasTol)) {
      cached->warmStartHit = true;
      return *std::move(cached);
    }
  }

  // Origin-in-hull is invariant under positive per-row scaling (convex
  // weights rescale accordingly), so normalize rows to unit length: this
  // keeps the tableau well conditioned when row magnitudes span orders of
  // magnitude. A row that is itself (numerically) the origin settles the
  // question outright.
  Matrix scaled = rows;
  Vector rowNorm(m);
  for (Index i = 0; i < m; ++i) {
    rowNorm[i] = rows.row(i).norm();
    if (rowNorm[i] <= 1e-30) {
      FeasibilityOutcome outcome;
      outcome.kind = Feasibility::InHull;
      Vector weights = Vector::Zero(m);
      weights[i] = 1.0;
      outcome.weights = std::move(weights);
      outcome.basis = {i};
      outcome.tolerance = feasTol;
      return outcome;
    }
    scaled.row(i) /= rowNorm[i];
  }

  Matrix A(p + 1, m);
  A.topRows(p) = scaled.transpose();
  A.row(p).setOnes();
  Vector b = Vector::Zero(p + 1);
  b[p] = 1.0;

  const PhaseOneResult lp = phaseOneSimplex(A, b);

  FeasibilityOutcome outcome;
  outcome.iterations = lp.iterations;
  outcome.tolerance = feasTol;

  if (lp.objective <= 2e-9) {
    Vector weights = lp.solution.cwiseMax(0.0);
    if (weights.sum() <= 0.5) {
      throw NumericallyAmbiguousError(
          "in-hull weights lost their normalization");
    }
    // Convert the weights found for the unit-length rows back to weights
    // for the rows as given.
    for (Index i = 0; i < m; ++i) weights[i] /= rowNorm[i];
    weights /= weights.sum();

    std::vector<Index> support;
    for (Index j = 0; j < m; ++j) {
      if (weights[j] > 1e-12) support.push_back(j);
    }

    const double residual =
        p > 0 ? (rows.transpose() * weights).cwiseAbs().maxCoeff() : 0.0;
    if (residual <= feasTol) {
      outcome.kind = Feasibility::InHull;
      outcome.weights = std::move(weights);
      outcome.basis = std::move(support);
      return outcome;
    }
    // Tableau drift: re-solve the certificate on the support directly.
    if (auto polished = certifyInHull(rows, support, feasTol)) {
      polished->iterations = lp.iterations;
      return *std::move(polished);
    }
    throw NumericallyAmbiguousError(
        "feasible verdict failed certificate verification");
  }

  Vector u = lp.duals.head(p);
  const double norm = u.norm();
  if (!(norm > 0.0)) {
    throw NumericallyAmbiguousError(
        "separating direction degenerated to zero");
  }
  Vector witness = -u / norm;
  for (Index i = 0; i < m; ++i) {
    if (!(rows.row(i).dot(witness) > 0.0)) {
      throw NumericallyAmbiguousError(
          "separating direction is not strictly separating");
    }
  }
  outcome.kind = Feasibility::NotInHull;
  outcome.witness = std::move(witness);
  return outcome;
}

bool basisStillValid(const std::vector<Index>& basis,
                     const std::vector<Index>& changedRows) {
  if (basis.empty()) return false;
  for (Index changed : changedRows) {
    if (std::find(basis.begin(), basis.end(), changed) != basis.end()) {
      return false;
    }
  }
  return true;
}

}  // namespace deepcore
