#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "deepcore/geometry.hpp"
#include "test_support.hpp"

using namespace deepcore;
using testing::gaussianCloud;
using testing::rowMatrix;
using testing::vec;

namespace {

const Matrix kTriangle = rowMatrix({{1, 0}, {0, 1}, {-1, -1}});

}  // namespace

TEST_CASE("point cloud rejects empty or non-finite input") {
  CHECK_THROWS_AS(PointCloud(Matrix(0, 2)), DimensionError);
  CHECK_THROWS_AS(PointCloud(Matrix(2, 0)), DimensionError);
  Matrix bad = rowMatrix({{1, 2}, {3, 4}});
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS((PointCloud(bad)), ParseError);
}

TEST_CASE("centering subtracts the query and tracks scale") {
  const PointCloud cloud(rowMatrix({{2, 1}, {1, 2}, {0, 0}}));
  const CenteredCloud centered = center(cloud, vec({1, 1}));
  CHECK(centered.points.row(0) == Eigen::RowVector2d(1, 0));
  CHECK(centered.points.row(2) == Eigen::RowVector2d(-1, -1));
  CHECK(centered.scale == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(centered.hasPointAtOrigin);

  const CenteredCloud onPoint = center(cloud, vec({0, 0}));
  CHECK(onPoint.hasPointAtOrigin);

  CHECK_THROWS_AS(center(cloud, vec({1, 2, 3})), DimensionError);
}

TEST_CASE("origin rows are dropped and codes expand back around them") {
  const PointCloud cloud(rowMatrix({{1, 1}, {0, 3}, {1, 1}, {2, 2}}));
  const CenteredCloud centered = center(cloud, vec({1, 1}));
  const std::vector<Index> zeros = originRows(centered);
  REQUIRE(zeros == std::vector<Index>{0, 2});

  const CenteredCloud reduced = dropRows(centered, zeros);
  REQUIRE(reduced.size() == 2);
  CHECK(reduced.points.row(0) == Eigen::RowVector2d(-1, 2));
  CHECK(reduced.points.row(1) == Eigen::RowVector2d(1, 1));
  CHECK_FALSE(reduced.hasPointAtOrigin);

  const ConeCode expanded = expandCode(ConeCode::fromString("01"), zeros, 4);
  CHECK(expanded.toString() == "1011");
  CHECK_THROWS_AS(expandCode(ConeCode::fromString("011"), zeros, 4),
                  DimensionError);
}

TEST_CASE("perturbation commutes with reordering the cloud") {
  const PointCloud cloud = gaussianCloud(8, 3, 42);
  Matrix reversed(8, 3);
  for (Index i = 0; i < 8; ++i) reversed.row(i) = cloud.points().row(7 - i);

  const PointCloud a = perturb(cloud, 1e-7, 99);
  const PointCloud b = perturb(PointCloud(reversed), 1e-7, 99);
  for (Index i = 0; i < 8; ++i) {
    CHECK(a.points().row(i) == b.points().row(7 - i));
  }
}

TEST_CASE("perturbation separates exact duplicates") {
  const PointCloud cloud(rowMatrix({{1, 2}, {1, 2}, {1, 2}, {4, 5}}));
  const PointCloud jittered = perturb(cloud, 1e-7, 7);
  CHECK(jittered.points().row(0) != jittered.points().row(1));
  CHECK(jittered.points().row(1) != jittered.points().row(2));
  CHECK(jittered.points().row(0) != jittered.points().row(2));
  // Jitter is small relative to the data spread.
  CHECK((jittered.points() - cloud.points()).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("perturbation is deterministic in the seed and never a no-op") {
  const PointCloud cloud = gaussianCloud(5, 2, 3);
  const PointCloud a = perturb(cloud, 0.0, 11);  // magnitude clamped up
  const PointCloud b = perturb(cloud, 0.0, 11);
  CHECK(a.points() == b.points());
  CHECK(a.points() != cloud.points());
  const PointCloud c = perturb(cloud, 0.0, 12);
  CHECK(a.points() != c.points());
}

TEST_CASE("elimination rank matches known matrices") {
  CHECK(eliminationRank(rowMatrix({{1, 0}, {0, 1}}), 1e-12) == 2);
  CHECK(eliminationRank(rowMatrix({{1, 1}, {2, 2}}), 1e-12) == 1);
  CHECK(eliminationRank(Matrix::Zero(3, 3), 1e-12) == 0);
  CHECK(eliminationRank(rowMatrix({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}), 1e-9) ==
        2);
}

TEST_CASE("nullspace direction is orthogonal to the rows") {
  const Matrix rows = rowMatrix({{1, 2, 3}, {4, 5, 6}});
  const Vector v = nullspaceDirection(rows, 1e-12);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(std::abs(rows.row(0).dot(v)) < 1e-12);
  CHECK(std::abs(rows.row(1).dot(v)) < 1e-12);

  SUBCASE("single row in the plane") {
    const Vector w = nullspaceDirection(rowMatrix({{3, 4}}), 1e-12);
    CHECK(std::abs(3 * w[0] + 4 * w[1]) < 1e-12);
  }
  SUBCASE("empty system returns the first axis") {
    const Vector e = nullspaceDirection(Matrix(0, 3), 1e-12);
    CHECK(e == vec({1, 0, 0}));
  }
  SUBCASE("dependent rows are rejected") {
    CHECK_THROWS_AS(nullspaceDirection(rowMatrix({{1, 1, 0}, {2, 2, 0}}),
                                       1e-12),
                    DegeneracyError);
  }
}

TEST_CASE("general position accepts a triangle and rejects collinearity") {
  const auto good = checkGeneralPosition(kTriangle, std::sqrt(2.0),
                                         GeneralPositionMode::Exhaustive);
  CHECK(good.ok);

  const Matrix collinear = rowMatrix({{1, 1}, {2, 2}, {0, 1}});
  const auto bad = checkGeneralPosition(collinear, std::sqrt(8.0),
                                        GeneralPositionMode::Exhaustive);
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.violation.has_value());
  CHECK(*bad.violation == std::vector<Index>{0, 1});
}

TEST_CASE("general position flags a point sitting on the query") {
  const Matrix withOrigin = rowMatrix({{0, 0}, {1, 0}, {0, 1}});
  const auto report = checkGeneralPosition(withOrigin, 1.0,
                                           GeneralPositionMode::Exhaustive);
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.violation.has_value());
  CHECK(std::find(report.violation->begin(), report.violation->end(), 0) !=
        report.violation->end());
}

TEST_CASE("sampled general position finds planted degeneracies") {
  Matrix m = gaussianCloud(12, 3, 5).points();
  m.row(7) = 2.5 * m.row(2);  // two points on a common line through origin
  const auto report =
      checkGeneralPosition(m, m.rowwise().norm().maxCoeff(),
                           GeneralPositionMode::Sampled, 17, 4000);
  CHECK_FALSE(report.ok);
}

TEST_CASE("plane basis is orthonormal and orthogonal to the anchor") {
  const Vector anchor = vec({0, 0, 1});
  const Matrix basis = planeBasis(anchor);
  REQUIRE(basis.rows() == 3);
  REQUIRE(basis.cols() == 2);
  CHECK(basis.col(0) == vec({0, 1, 0}));
  CHECK(basis.col(1) == vec({-1, 0, 0}));
  CHECK((basis.transpose() * basis).isIdentity(1e-14));
  CHECK((anchor.transpose() * basis).norm() < 1e-14);

  // The in-plane component keeps its length under projection.
  const Vector p = vec({1, 2, 3});
  const Vector projected = basis.transpose() * p;
  CHECK(projected == vec({2, -1}));
  CHECK(projected.norm() == doctest::Approx(std::sqrt(5.0)));

  SUBCASE("generic anchors stay orthonormal") {
    const Vector g = vec({0.3, -1.2, 0.7, 2.0});
    const Matrix b = planeBasis(g);
    CHECK((b.transpose() * b).isIdentity(1e-12));
    CHECK((g.transpose() * b).norm() < 1e-12);
  }
  SUBCASE("one dimension yields an empty basis") {
    const Matrix b = planeBasis(vec({2.0}));
    CHECK(b.rows() == 1);
    CHECK(b.cols() == 0);
  }
}

TEST_CASE("sign vector encodes halfspace membership") {
  const Vector r = vec({0.995, 0.0995}).normalized();
  CHECK(signVector(kTriangle, r, std::sqrt(2.0)).toString() == "110");

  SUBCASE("a projection on the boundary throws with the point index") {
    try {
      signVector(rowMatrix({{1, 0}, {0, 1}}), vec({0, 1}), 1.0);
      FAIL("expected ZeroProjectionError");
    } catch (const ZeroProjectionError& e) {
      CHECK(e.pointIndex() == 0);
    }
  }
}

TEST_CASE("plane cache aligns rows with the cone code") {
  const ConeCode code = ConeCode::fromString("110");
  const PlaneCache cache = makePlaneCache(kTriangle, 0, code);
  CHECK(cache.anchor == 0);
  CHECK(cache.signState == code);
  CHECK(cache.projected.row(0).norm() == 0.0);  // anchor row cleared

  // Row i is (code(i) ? +1 : -1) * x_i' * basis.
  const Matrix raw = kTriangle * cache.basis;
  CHECK(cache.projected.row(1) == raw.row(1));
  CHECK(cache.projected.row(2) == (-raw.row(2)).eval());
}

TEST_CASE("initial direction splits all points cleanly and is seeded") {
  const PointCloud cloud = gaussianCloud(9, 3, 21);
  const CenteredCloud centered = center(cloud, vec({0, 0, 0}));
  const auto [dir, code] = initialDirection(centered, 77);
  const auto [dir2, code2] = initialDirection(centered, 77);
  CHECK(dir.vec() == dir2.vec());
  CHECK(code == code2);
  CHECK(code == signVector(centered.points, dir.vec(), centered.scale));
}

TEST_CASE("direction wrapper enforces unit length") {
  CHECK_THROWS_AS(Direction(vec({1, 1})), DepthError);
  CHECK_NOTHROW(Direction(vec({1, 1}).normalized()));
}
