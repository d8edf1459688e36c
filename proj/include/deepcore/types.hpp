// Shared aliases, result records, and the error hierarchy.
#ifndef DEEPCORE_TYPES_HPP
#define DEEPCORE_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "deepcore/cone_code.hpp"

namespace deepcore {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Base class for every error this library raises on its own behalf.
class DepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A data point projects (numerically) to zero along a candidate direction,
// so its halfspace membership is undecidable.
class ZeroProjectionError : public DepthError {
 public:
  explicit ZeroProjectionError(Index pointIndex)
      : DepthError("point " + std::to_string(pointIndex) +
                   " projects to zero; direction lies on its hyperplane"),
        pointIndex_(pointIndex) {}

  Index pointIndex() const { return pointIndex_; }

 private:
  Index pointIndex_;
};

// The centered sample is not in general position and perturbation retries
// did not resolve it.
class DegeneracyError : public DepthError {
 public:
  using DepthError::DepthError;
};

class DimensionError : public DepthError {
 public:
  using DepthError::DepthError;
};

class IterationLimitError : public DepthError {
 public:
  using DepthError::DepthError;
};

// A numeric quantity fell inside the tolerance band where neither outcome
// can be certified.
class NumericallyAmbiguousError : public DepthError {
 public:
  using DepthError::DepthError;
};

// A requested sign pattern corresponds to no open cone of directions.
class UnrealizableConeError : public DepthError {
 public:
  using DepthError::DepthError;
};

class ExhaustedRetriesError : public DepthError {
 public:
  using DepthError::DepthError;
};

class ParseError : public DepthError {
 public:
  using DepthError::DepthError;
};

// Counters describing one depth computation.
struct SearchDiagnostics {
  std::int64_t conesVisited = 0;
  std::int64_t lpCalls = 0;
  std::int64_t lpCacheHits = 0;
  std::int64_t generations = 0;
  std::int64_t mirrorDuplicates = 0;
  std::int64_t perturbRetries = 0;
};

// Depth is reported as the exact integer count of sample points in the
// minimizing closed halfspace; value() divides by the sample size.
struct DepthResult {
  Index count = 0;
  Index sampleSize = 0;
  ConeCode minimizingCode;
  std::optional<Vector> witness;
  SearchDiagnostics diagnostics;

  double value() const {
    return sampleSize > 0 ? static_cast<double>(count) /
                                static_cast<double>(sampleSize)
                          : 0.0;
  }

  std::string rational() const {
    return std::to_string(count) + "/" + std::to_string(sampleSize);
  }
};

}  // namespace deepcore

#endif  // DEEPCORE_TYPES_HPP
