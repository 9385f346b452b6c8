// Copyright 2026 The seplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include "catch2/catch_amalgamated.hpp"
#include "seplab/dimension.hpp"
#include "seplab/operators.hpp"
#include "seplab/uncertainty.hpp"

using namespace seplab;
using Catch::Approx;

namespace {

Vector E1(std::size_t n) {
  Vector u = Vector::Zero(static_cast<Eigen::Index>(n));
  u(0) = 1.0;
  return u;
}

}  // namespace

TEST_CASE("concentration bound values") {
  CHECK(ConcentrationBound(2, 1, 1.0, 0.1, 1.0) ==
        Approx(0.4 / std::numbers::pi).epsilon(1e-14));
  CHECK(ConcentrationBound(2, 1, 1.0, 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(ConcentrationBound(2, 1, 1.0, 0.1, 0.0), PreconditionError);
  // Direct evaluation of the product form for a larger case.
  const double direct = std::pow(2.0, 3 * 3) * std::pow(0.4, 3) /
                        std::pow(std::numbers::pi * std::numbers::pi / 2.0, 3) /
                        std::pow(2.0, 3);
  CHECK(ConcentrationBound(4, 3, 1.0, 0.2, 2.0) == Approx(direct).epsilon(1e-12));
}

TEST_CASE("small-ball probability in the disk matches the strip area") {
  const double exact =
      2.0 / std::numbers::pi * (std::asin(0.1) + 0.1 * std::sqrt(0.99));
  CHECK(exact == Approx(0.1271).margin(1e-4));
  CHECK(exact <= ConcentrationBound(2, 1, 1.0, 0.1, 1.0));
  const auto e = SmallBallMc(2, 1, 1.0, E1(2), Vector::Zero(1), 0.1, 100000, 1);
  CHECK(std::abs(e.p_hat - exact) <= 0.003);
  CHECK(e.ci_half_width > 0.0);
}

TEST_CASE("small-ball probability in the 3-ball matches the slab volume") {
  // x_1 of a uniform point in the unit 3-ball has density 3/4 (1 - t^2).
  for (double delta : {0.05, 0.2, 0.5}) {
    const double exact = 1.5 * delta - 0.5 * delta * delta * delta;
    const auto e = SmallBallMc(3, 1, 1.0, E1(3), Vector::Zero(1), delta, 50000, 2);
    CHECK(std::abs(e.p_hat - exact) <= e.ci_half_width);
  }
}

TEST_CASE("huge radius makes the event certain") {
  const Vector u = Vector::Constant(3, 0.5);
  Vector v(2);
  v << 0.1, -0.2;
  const double delta = 1.0 * std::sqrt(2.0) * u.norm() + v.norm() + 1e-9;
  const auto e = SmallBallMc(3, 2, 1.0, u, v, delta, 2000, 3);
  CHECK(e.p_hat == 1.0);
}

TEST_CASE("small-ball estimate is rotation invariant") {
  Vector q(3);
  q << 0.36, 0.48, 0.8;  // unit vector, the image of e1 under some rotation
  const auto a = SmallBallMc(3, 2, 1.0, E1(3), Vector::Zero(2), 0.3, 40000, 5);
  const auto b = SmallBallMc(3, 2, 1.0, q, Vector::Zero(2), 0.3, 40000, 6);
  CHECK(std::abs(a.p_hat - b.p_hat) <= a.ci_half_width + b.ci_half_width);
}

TEST_CASE("small-ball input checks") {
  CHECK_THROWS_AS(SmallBallMc(2, 1, 1.0, Vector::Zero(2), Vector::Zero(1), 0.1, 1000, 0),
                  PreconditionError);
  CHECK_THROWS_AS(SmallBallMc(2, 1, 1.0, E1(2), Vector::Zero(1), 0.1, 999, 0),
                  ConfigError);
  CHECK_THROWS_AS(SmallBallMc(2, 1, 1.0, E1(3), Vector::Zero(1), 0.1, 1000, 0),
                  DimensionError);
}

TEST_CASE("concentration report bound and slope") {
  const auto report = RunConcentration(2, 1, 1.0, E1(2), Vector::Zero(1),
                                       {0.05, 0.1, 0.2}, 20000, 9);
  CHECK(report.BoundHolds());
  REQUIRE(report.LogLogSlope().has_value());
  CHECK(std::abs(*report.LogLogSlope() - 1.0) <= 0.25);
  for (const auto& row : report.rows) {
    CHECK(row.p_hat >= 0.0);
    CHECK(row.p_hat <= 1.0);
    CHECK(row.ci > 0.0);
  }
}

TEST_CASE("null-space margin") {
  const Matrix a = SampleA(RandomMatrixSpec{}, 4, 4, 3);
  const MeasurementPair p(a, BuildB(BKind::kDctOrthonormal, 4, 3));
  const Vector v = KernelBasis(p.h()).col(0);
  const PointCloud with_kernel = PointCloud::FromPoints({v, E1(7)});
  CHECK(NullspaceMargin(p, with_kernel) <= 1e-9);

  const PointCloud cloud = UnionSparseCloud(7, 2, 50, 1.0, 4);
  std::vector<Vector> nonzero;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (cloud.point(i).norm() > 1e-12) nonzero.push_back(cloud.point(i));
  const PointCloud c = PointCloud::FromPoints(nonzero);
  const double m = NullspaceMargin(p, c);
  CHECK(m > 0.0);
  CHECK(NullspaceMargin(p, c.Scaled(-3.5)) == Approx(m).epsilon(1e-12));
  CHECK(NullspaceMargin(p, c.Prefix(10)) >= m);
  CHECK_THROWS_AS(NullspaceMargin(p, PointCloud::FromPoints({Vector::Zero(7)})),
                  PreconditionError);
}

TEST_CASE("donoho-stark on identity and hadamard") {
  const Matrix i4 = Matrix::Identity(4, 4);
  const auto v4 = ClassicalCheck(i4, HadamardBasis(4), Principle::kDonohoStark);
  CHECK(v4.Holds());
  CHECK(v4.checked_pairs == 16);
  CHECK_FALSE(v4.sampled);
  CHECK(*v4.mu == Approx(0.5));

  const auto v8 = ClassicalCheck(Matrix::Identity(8, 8), HadamardBasis(8),
                                 Principle::kDonohoStark);
  CHECK(v8.Holds());
  CHECK(v8.checked_pairs == 64 + 2 * 8 * 28 + 2 * 8 * 56);
}

TEST_CASE("elad-bruckstein on identity and hadamard") {
  const auto v = ClassicalCheck(Matrix::Identity(4, 4), HadamardBasis(4),
                                Principle::kEladBruckstein);
  CHECK(v.Holds());
  // (1,1), (1,2), (2,1) support sizes.
  CHECK(v.checked_pairs == 16 + 2 * 4 * 6);
}

TEST_CASE("the comb reaches the equality region") {
  const Matrix h = HadamardBasis(4);
  // p on {0, 2} and its transform q = H^T p on {0, 1}: H q = p.
  Vector p = Vector::Zero(4);
  p(0) = 1.0;
  p(2) = 1.0;
  const Vector q = h.transpose() * p;
  CHECK(q(2) == Approx(0.0).margin(1e-15));
  CHECK(q(3) == Approx(0.0).margin(1e-15));
  CHECK((h * q - p).norm() < 1e-12);

  const auto pairs = FindKernelPairs(Matrix::Identity(4, 4), h, 2, 2);
  bool comb = false;
  for (const auto& v : pairs) {
    if (v.support_p == std::vector<std::size_t>{0, 2} &&
        v.support_q == std::vector<std::size_t>{0, 1}) {
      comb = true;
      // Kernel check: p part equals B_Tq q part.
      Vector lhs = Vector::Zero(4), rhs = Vector::Zero(4);
      lhs(0) = v.witness(0);
      lhs(2) = v.witness(1);
      rhs = h.col(0) * v.witness(2) + h.col(1) * v.witness(3);
      CHECK((lhs - rhs).norm() <= 1e-9);
    }
  }
  CHECK(comb);
}

TEST_CASE("classical check is invariant under column permutations") {
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(8);
  perm.indices() << 3, 7, 0, 5, 1, 6, 2, 4;
  const Matrix h = HadamardBasis(8);
  const Matrix d = DctBasis(8);
  for (auto pr : {Principle::kDonohoStark, Principle::kEladBruckstein}) {
    const auto base = ClassicalCheck(d, h, pr);
    const auto moved = ClassicalCheck(d * perm, h * perm.transpose(), pr);
    CHECK(base.violations.size() == moved.violations.size());
    CHECK(base.checked_pairs == moved.checked_pairs);
  }
}

TEST_CASE("classical check preconditions") {
  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(ClassicalCheck(bad, HadamardBasis(4), Principle::kDonohoStark),
                  PreconditionError);
  CHECK_THROWS_AS(ClassicalCheck(Matrix::Identity(8, 8), HadamardBasis(8),
                                 Principle::kDonohoStark, 10),
                  CapacityError);
  CHECK(ParsePrinciple(ToString(Principle::kEladBruckstein)) ==
        Principle::kEladBruckstein);
}
