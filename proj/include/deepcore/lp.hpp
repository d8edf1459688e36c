// Linear-programming feasibility kernel: decides whether the origin lies in
// the convex hull of a set of points, returning convex weights as the
// in-hull certificate or a strictly separating direction as the out-of-hull
// certificate. Every verdict is verified against its certificate before it
// is returned.
#ifndef DEEPCORE_LP_HPP
#define DEEPCORE_LP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "deepcore/types.hpp"

namespace deepcore {

enum class Feasibility { InHull, NotInHull };

struct SimplexSettings {
  // Threshold scale for pivots and entering-column tests; multiplied by
  // (1 + max |entry|).
  double relativePivotTol = 1e-11;
  // Iterations of largest-coefficient pricing before switching to Bland's
  // anti-cycling rule; negative means 3 * (columns + rows).
  std::int64_t blandAfter = -1;
  // Hard cap; negative means 2000 + 200 * (columns + rows).
  std::int64_t maxIterations = -1;
};

// Minimizes the sum of artificial variables for A x = b, x >= 0 (b must be
// nonnegative). The system is feasible exactly when the reported objective
// is zero up to tolerance, which the caller judges.
struct PhaseOneResult {
  double objective = 0.0;
  Vector solution;  // original variables, zero where nonbasic
  Vector duals;     // one multiplier per constraint row
  std::int64_t iterations = 0;
};

PhaseOneResult phaseOneSimplex(const Matrix& A, const Vector& b,
                               const SimplexSettings& settings = {});

struct FeasibilityOutcome {
  Feasibility kind = Feasibility::InHull;
  // InHull: convex weights over the input rows (nonnegative, sum one,
  // weighted sum verified to vanish within tolerance).
  std::optional<Vector> weights;
  // Indices of rows carrying non-negligible weight.
  std::vector<Index> basis;
  // NotInHull: unit direction with rows * witness strictly positive.
  std::optional<Vector> witness;
  std::int64_t iterations = 0;
  bool warmStartHit = false;
  double tolerance = 0.0;  // the feasibility tolerance actually used
};

// Decides origin-in-hull for the rows of `rows` (m points in R^p).
// `tolerance` <= 0 selects 1e-9 * (1 + max row norm). When `warmStart`
// names rows whose hull contained the origin before a small change, the
// certificate is re-solved and verified first, skipping the simplex when it
// still holds.
FeasibilityOutcome originInHull(
    const Matrix& rows,
    const std::vector<Index>* warmStart = nullptr,
    double tolerance = -1.0);

// True when none of the changed rows participates in the stored hull
// certificate, i.e. the cached in-hull verdict is still binding.
bool basisStillValid(const std::vector<Index>& basis,
                     const std::vector<Index>& changedRows);

}  // namespace deepcore

#endif  // DEEPCORE_LP_HPP
