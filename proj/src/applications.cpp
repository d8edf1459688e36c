#include "deepcore/applications.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "deepcore/lp.hpp"
#include "deepcore/rng.hpp"

namespace deepcore {

namespace {

// Shared driver for the exact oracles that operate on centered data: hull
// precheck first (on pristine data, so a boundary query is not pushed
// around by jitter), then perturbation retries around the oracle.
template <typename Oracle>
DepthResult centeredOracleDepth(const PointCloud& cloud, const Vector& query,
                                const SearchOptions& options,
                                Oracle&& oracle) {
  const Index n = cloud.size();
  SearchDiagnostics diag{};
  const CenteredCloud base = center(cloud, query);

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
    } catch (const NumericallyAmbiguousError&) {
      // Borderline membership; the oracle works it out on perturbed data.
    }
  }

  std::string lastFailure = "no attempt made";
  for (int attempt = 0; attempt <= options.maxRetries; ++attempt) {
    try {
      CenteredCloud data;
      if (attempt == 0) {
        if (base.hasPointAtOrigin) {
          // Coincident points lie in every closed halfspace: run the oracle
          // on the remaining rows and add them back to the count.
          const std::vector<Index> zeros = originRows(base);
          const Index atQuery = static_cast<Index>(zeros.size());
          DepthResult result;
          if (atQuery == n) {
            result.count = n;
            result.witness = Vector::Unit(cloud.dimension(), 0);
            result.minimizingCode = expandCode(ConeCode(0), zeros, n);
          } else {
            const CenteredCloud reduced = dropRows(base, zeros);
            if (reduced.size() < cloud.dimension()) {
              throw DegeneracyError(
                  "points coinciding with the query leave too few distinct "
                  "points for the oracle");
            }
            result = oracle(reduced);
            result.count += atQuery;
            result.minimizingCode =
                expandCode(result.minimizingCode, zeros, n);
          }
          result.sampleSize = n;
          diag.perturbRetries = 0;
          result.diagnostics = diag;
          return result;
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
      DepthResult result = oracle(data);
      diag.perturbRetries = attempt;
      result.diagnostics = diag;
      return result;
    } catch (const DimensionError&) {
      throw;
    } catch (const DepthError& error) {
      lastFailure = error.what();
    }
  }
  throw DegeneracyError("depth oracle failed after " +
                        std::to_string(options.maxRetries) +
                        " perturbation retries; last failure: " + lastFailure);
}

}  // namespace

DepthResult computeDepth(const PointCloud& cloud, const Vector& query,
                         const DepthOptions& options) {
  switch (options.method) {
    case DepthMethod::Exact:
      return tukeyDepth(cloud, query, options.search);
    case DepthMethod::Combinatorial:
      return centeredOracleDepth(
          cloud, query, options.search,
          [](const CenteredCloud& data) { return combinatorialDepth(data); });
    case DepthMethod::Planar:
      if (cloud.dimension() != 2) {
        throw DimensionError("planar method requires two-dimensional data");
      }
      return centeredOracleDepth(
          cloud, query, options.search,
          [](const CenteredCloud& data) { return planarDepth(data); });
    case DepthMethod::Approximate: {
      if (query.size() != cloud.dimension()) {
        throw DimensionError("query dimension does not match the data");
      }
      ApproxOptions approx;
      approx.directions = options.approxDirections;
      approx.seed = options.search.seed;
      return approximateDepth(center(cloud, query), approx);
    }
  }
  throw DepthError("unknown depth method");
}

DepthField computeDepthField(const PointCloud& cloud,
                             const DepthOptions& options) {
  DepthField field;
  field.sampleSize = cloud.size();
  field.method = options.method;
  field.counts.reserve(static_cast<std::size_t>(cloud.size()));
  for (Index i = 0; i < cloud.size(); ++i) {
    field.counts.push_back(computeDepth(cloud, cloud.point(i), options).count);
  }
  return field;
}

Vector depthWeightedMean(const PointCloud& cloud, const DepthField& field) {
  if (field.sampleSize != cloud.size() ||
      static_cast<Index>(field.counts.size()) != cloud.size()) {
    throw DimensionError("depth field does not match the cloud");
  }
  // Plain left-to-right accumulation: rerunning this on the same inputs
  // reproduces the result bit for bit.
  Vector weighted = Vector::Zero(cloud.dimension());
  double total = 0.0;
  for (Index i = 0; i < cloud.size(); ++i) {
    const double w =
        static_cast<double>(field.counts[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < cloud.dimension(); ++j) {
      weighted[j] += w * cloud.points()(i, j);
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw DegeneracyError("every depth in the field is zero");
  }
  return weighted / total;
}

RsgnCloud rsgnTransform(const PointCloud& cloud, const DepthField& field,
                        double dmax) {
  const Index n = cloud.size();
  const Index d = cloud.dimension();

  RsgnCloud out;
  out.center = depthWeightedMean(cloud, field);
  out.dmax = dmax;
  out.vectors = Matrix::Zero(n, d);

  const Matrix centered = cloud.points().rowwise() - out.center.transpose();
  const double scale = centered.rowwise().norm().maxCoeff();
  const double tol = kRelativeTol * std::max(1.0, scale);
  for (Index i = 0; i < n; ++i) {
    const double norm = centered.row(i).norm();
    if (norm <= tol) {
      ++out.degenerate;
      continue;
    }
    out.vectors.row(i) =
        centered.row(i) / norm * (dmax - field.value(i));
  }
  return out;
}

RobustPcaResult robustPca(const PointCloud& cloud,
                          const DepthOptions& options) {
  RobustPcaResult result;
  result.field = computeDepthField(cloud, options);

  const RsgnCloud rsgn = rsgnTransform(cloud, result.field);
  result.center = rsgn.center;

  Eigen::JacobiSVD<Matrix> svd(rsgn.vectors, Eigen::ComputeFullV);
  result.axes = svd.matrixV();
  result.singularValues = svd.singularValues();

  for (Index c = 0; c < result.axes.cols(); ++c) {
    Index argmax = 0;
    result.axes.col(c).cwiseAbs().maxCoeff(&argmax);
    if (result.axes(argmax, c) < 0.0) result.axes.col(c) = -result.axes.col(c);
  }

  const double top = result.singularValues.maxCoeff();
  const double bottom = result.singularValues.minCoeff();
  result.rankDeficient = !(bottom > 1e-10 * top);
  return result;
}

DdPlot ddPlot(const PointCloud& first, const PointCloud& second,
              const DepthOptions& options, bool excludeOutsiders) {
  if (first.dimension() != second.dimension()) {
    throw DimensionError("samples live in different dimensions");
  }
  const Index total = first.size() + second.size();

  Matrix coords(total, 2);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (int which = 0; which < 2; ++which) {
    const PointCloud& sample = which == 0 ? first : second;
    for (Index i = 0; i < sample.size(); ++i, ++row) {
      const Vector point = sample.point(i);
      coords(row, 0) = computeDepth(first, point, options).value();
      coords(row, 1) = computeDepth(second, point, options).value();
      labels.push_back(which);
    }
  }

  if (!excludeOutsiders) {
    return {std::move(coords), std::move(labels)};
  }

  DdPlot filtered;
  std::vector<Index> keep;
  for (Index r = 0; r < total; ++r) {
    if (coords(r, 0) != 0.0 || coords(r, 1) != 0.0) keep.push_back(r);
  }
  filtered.coords = Matrix(static_cast<Index>(keep.size()), 2);
  filtered.labels.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    filtered.coords.row(static_cast<Index>(k)) = coords.row(keep[k]);
    filtered.labels.push_back(labels[static_cast<std::size_t>(keep[k])]);
  }
  return filtered;
}

}  // namespace deepcore
