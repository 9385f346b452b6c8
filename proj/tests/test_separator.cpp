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

#include "catch2/catch_amalgamated.hpp"
#include "oracle.hpp"
#include "seplab/dimension.hpp"
#include "seplab/operators.hpp"
#include "seplab/rng.hpp"
#include "seplab/separator.hpp"
#include "seplab/source_models.hpp"

using namespace seplab;
using Catch::Approx;

namespace {

MeasurementPair SmallPair(std::size_t k, std::size_t n, std::size_t split,
                          std::uint64_t seed, BKind kind = BKind::kIdentityEmbed) {
  const Matrix a = SampleA(RandomMatrixSpec{}, k, n - split, seed);
  const Matrix b = split ? BuildB(kind, k, split) : Matrix(k, 0);
  return MeasurementPair(a, b);
}

oracle::Verdict VerdictOf(const SeparationResult& r) {
  if (std::holds_alternative<Unique>(r)) return oracle::Verdict::kUnique;
  if (std::holds_alternative<Ambiguous>(r)) return oracle::Verdict::kAmbiguous;
  return oracle::Verdict::kNone;
}

}  // namespace

TEST_CASE("zero model and zero observation") {
  const MeasurementPair p = SmallPair(3, 4, 2, 1);
  const auto r = Separate(p, Vector::Zero(3), {0, 0});
  REQUIRE(std::holds_alternative<Unique>(r));
  CHECK(std::get<Unique>(r).x.isZero(0.0));
  CHECK(std::get<Unique>(r).residual == 0.0);
  CHECK(std::holds_alternative<NoneConsistent>(
      Separate(p, Vector::Ones(3), {0, 0})));
}

TEST_CASE("one-plus-one sparse source is recovered") {
  const MeasurementPair p = SmallPair(3, 4, 2, 5);
  Vector x(4);
  x << 0.0, 0.7, -0.4, 0.0;
  const auto r = Separate(p, p.h() * x, {1, 1});
  REQUIRE(std::holds_alternative<Unique>(r));
  CHECK((std::get<Unique>(r).x - x).norm() <= 1e-9);
  CHECK(std::get<Unique>(r).support == std::vector<std::size_t>{1, 2});
}

TEST_CASE("square restricted systems are ambiguous") {
  // s1 + s2 = k: every admissible support of full size solves exactly.
  const MeasurementPair p = SmallPair(2, 4, 2, 8);
  Vector x(4);
  x << 0.5, 0.0, 0.0, 0.3;
  const auto r = Separate(p, p.h() * x, {1, 1});
  REQUIRE(std::holds_alternative<Ambiguous>(r));
  const Ambiguous& a = std::get<Ambiguous>(r);
  CHECK((a.witness_a - a.witness_b).cwiseAbs().maxCoeff() > 1e-7);
  CHECK((p.h() * a.witness_a - p.h() * x).norm() < 1e-9);
  CHECK((p.h() * a.witness_b - p.h() * x).norm() < 1e-9);

  SeparatorOptions all;
  all.exhaustive_count = true;
  const auto full = Separate(p, p.h() * x, {1, 1}, all);
  REQUIRE(std::holds_alternative<Ambiguous>(full));
  CHECK(std::get<Ambiguous>(full).count >= 4);
}

TEST_CASE("rank-deficient consistent support is a continuum") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 1.0, 2.0;  // parallel columns
  MeasurementPair p(a, Matrix(2, 0));
  Vector w(2);
  w << 1.0, 1.0;
  // The single-column supports already disagree, so the default early exit
  // stops before reaching the rank-deficient pair.
  CHECK_FALSE(std::get<Ambiguous>(Separate(p, w, {2, 0})).continuum);
  SeparatorOptions all;
  all.exhaustive_count = true;
  const auto r = Separate(p, w, {2, 0}, all);
  REQUIRE(std::holds_alternative<Ambiguous>(r));
  const Ambiguous& amb = std::get<Ambiguous>(r);
  CHECK(amb.continuum);
  CHECK((a * amb.witness_b - w).norm() < 1e-9);
}

TEST_CASE("separator input errors") {
  const MeasurementPair p = SmallPair(3, 4, 2, 1);
  CHECK_THROWS_AS(Separate(p, Vector::Zero(2), {1, 1}), DimensionError);
  CHECK_THROWS_AS(Separate(p, Vector::Zero(3), {3, 1}), ConfigError);
  SeparatorOptions tight;
  tight.budget = 5;
  CHECK_THROWS_AS(Separate(p, Vector::Zero(3), {1, 1}, tight), CapacityError);
  CHECK(SupportCount(2, 2, {1, 1}) == 9);
  CHECK(SupportCount(20, 0, {4, 0}) == 1 + 20 + 190 + 1140 + 4845);
}

TEST_CASE("separator agrees with the brute-force oracle") {
  std::size_t agree = 0, unique_seen = 0, ambiguous_seen = 0, none_seen = 0;
  const int instances = 200;
  for (int t = 0; t < instances; ++t) {
    Rng rng(DeriveSeed(2024, t));
    const std::size_t n = 2 + rng.Below(7);  // 2..8
    const std::size_t split = rng.Below(n + 1);
    const std::size_t k = std::max<std::size_t>(split, 1 + rng.Below(n));
    const std::size_t s1 = rng.Below(n - split + 1);
    const std::size_t s2 = rng.Below(split + 1);
    const MeasurementPair p = SmallPair(k, n, split, DeriveSeed(2024, t, 1),
                                        BKind::kDctOrthonormal);
    Vector w;
    if (rng.Below(4) == 0) {
      w = Vector(k);
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.Normal();
    } else {
      const SignalSample s =
          SampleExactSparse(n, split, s1, s2, UniformLaw{}, DeriveSeed(2024, t, 2));
      w = p.h() * s.x;
    }
    const auto mine = Separate(p, w, {s1, s2});
    const auto ref = oracle::BruteSeparate(p.h(), w, static_cast<int>(split),
                                           static_cast<int>(s1),
                                           static_cast<int>(s2));
    bool same = VerdictOf(mine) == ref.verdict;
    if (same && ref.verdict == oracle::Verdict::kUnique)
      same = (std::get<Unique>(mine).x - ref.x).cwiseAbs().maxCoeff() <= 1e-7;
    agree += same;
    unique_seen += ref.verdict == oracle::Verdict::kUnique;
    ambiguous_seen += ref.verdict == oracle::Verdict::kAmbiguous;
    none_seen += ref.verdict == oracle::Verdict::kNone;
  }
  CHECK(agree == instances);
  // The instance mix exercises all three outcomes.
  CHECK(unique_seen > 0);
  CHECK(ambiguous_seen > 0);
  CHECK(none_seen > 0);
}

TEST_CASE("separation is linear in the observation") {
  const MeasurementPair p = SmallPair(6, 8, 3, 13, BKind::kDctOrthonormal);
  Vector x(8);
  x << 0, 0.4, 0, 0, -0.9, 0, 0.2, 0;
  for (double c : {2.0, -0.5, 1e3}) {
    const auto r = Separate(p, c * (p.h() * x), {2, 1});
    REQUIRE(std::holds_alternative<Unique>(r));
    CHECK((std::get<Unique>(r).x - c * x).cwiseAbs().maxCoeff() <=
          1e-9 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("extra measurements never turn a unique answer ambiguous") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const MeasurementPair p = SmallPair(5, 8, 3, seed, BKind::kDctOrthonormal);
    const SignalSample s = SampleExactSparse(8, 3, 2, 1, UniformLaw{}, seed + 77);
    const auto before = Separate(p, p.h() * s.x, {2, 1});
    REQUIRE(std::holds_alternative<Unique>(before));
    const Matrix extra_a = SampleA(RandomMatrixSpec{}, 2, 5, seed + 99);
    const Matrix extra_b = SampleA(RandomMatrixSpec{}, 2, 3, seed + 98);
    const MeasurementPair more = p.WithExtraRows(extra_a, extra_b);
    const auto after = Separate(more, more.h() * s.x, {2, 1});
    REQUIRE(std::holds_alternative<Unique>(after));
    CHECK((std::get<Unique>(after).x - s.x).norm() < 1e-8);
  }
}

TEST_CASE("holder estimate examples") {
  const MeasurementPair p = SmallPair(3, 4, 2, 21);
  Vector u(4);
  u << 0.0, 0.5, 0.0, 0.0;
  const PointCloud cloud = PointCloud::FromPoints({u, Vector::Zero(4)});
  CHECK(HolderEstimate(p, cloud, 0.5) ==
        Approx((p.h() * u).norm() / std::pow(u.norm(), 2.0)));

  const MeasurementPair iso(Matrix(4, 0), Matrix::Identity(4, 4));
  Rng rng(4);
  std::vector<Vector> pts;
  for (int i = 0; i < 6; ++i) {
    Vector v(4);
    for (int j = 0; j < 4; ++j) v(j) = rng.Uniform(-1, 1);
    pts.push_back(v);
  }
  CHECK(HolderEstimate(iso, PointCloud::FromPoints(pts), 1.0) == Approx(1.0));
}

TEST_CASE("holder estimate is the minimum pairwise ratio") {
  const MeasurementPair p = SmallPair(3, 4, 1, 31, BKind::kDctOrthonormal);
  Rng rng(5);
  std::vector<Vector> pts;
  for (int i = 0; i < 3; ++i) {
    Vector v(4);
    for (int j = 0; j < 4; ++j) v(j) = rng.Uniform(-1, 1);
    pts.push_back(v);
  }
  const double beta = 0.7;
  // Ratios over all pairs, with the origin counted as a cloud member.
  std::vector<Vector> with_origin = pts;
  with_origin.push_back(Vector::Zero(4));
  double expect = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < with_origin.size(); ++i)
    for (std::size_t j = i + 1; j < with_origin.size(); ++j) {
      const Vector d = with_origin[i] - with_origin[j];
      expect = std::min(expect, (p.h() * d).norm() / std::pow(d.norm(), 1.0 / beta));
    }
  CHECK(HolderEstimate(p, PointCloud::FromPoints(pts), beta) == Approx(expect));
}

TEST_CASE("holder estimate is monotone under nesting") {
  const MeasurementPair p = SmallPair(6, 10, 5, 3, BKind::kDctOrthonormal);
  const PointCloud big = UnionSparseCloud(10, 2, 200, 1.0, 6);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m : {10u, 50u, 100u, 200u}) {
    const double c = HolderEstimate(p, big.Prefix(m), 0.5);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("holder estimate needs two distinct points") {
  const MeasurementPair p = SmallPair(3, 4, 2, 1);
  const PointCloud zero = PointCloud::FromPoints({Vector::Zero(4)});
  CHECK_THROWS_AS(HolderEstimate(p, zero, 0.5), UndefinedEstimateError);
}

TEST_CASE("excision radius and vacuous passes") {
  const MeasurementPair p = SmallPair(6, 10, 5, 3, BKind::kDctOrthonormal);
  ExcisionLadder ladder{0.5, 4, 4};
  Vector tiny = Vector::Zero(10);
  tiny(0) = 0.01;
  const ExcisionReport r =
      ExcisionCheck(p, PointCloud::FromPoints({tiny}), ladder);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].radius == Approx(0.25));
  CHECK(r.rows[0].delta == Approx(1.0 / 16));
  CHECK_FALSE(r.rows[0].min_gain.has_value());
  CHECK(r.rows[0].pass);
  CHECK(r.j_observed == 4);
}

TEST_CASE("excision check on a sparse cloud") {
  const PointCloud cloud = UnionSparseCloud(10, 2, 1000, 1.0, 12);
  const MeasurementPair p = SmallPair(6, 10, 5, 44, BKind::kDctOrthonormal);
  const ExcisionReport r = ExcisionCheck(p, cloud, ExcisionLadder{});
  REQUIRE(r.rows.size() == 13);
  REQUIRE(r.j_observed.has_value());
  CHECK(*r.j_observed <= 6);
  CHECK(r.rows.back().pass);
}

TEST_CASE("holder condition arithmetic") {
  CHECK(HolderCondition(2.0, 5, 0.5));
  CHECK_FALSE(HolderCondition(2.0, 5, 0.6));
  CHECK(HolderCondition(0.0, 1, 0.99));
  CHECK_THROWS_AS(HolderCondition(1.0, 0, 0.5), ConfigError);
}

TEST_CASE("a kernel vector of H has zero gain") {
  const MeasurementPair p = SmallPair(4, 7, 3, 61, BKind::kDctOrthonormal);
  const Matrix kernel = KernelBasis(p.h());
  REQUIRE(kernel.cols() == 3);
  const Vector v = kernel.col(1);
  const PointCloud cloud = PointCloud::FromPoints({v, Vector::Zero(7)});
  CHECK(HolderEstimate(p, cloud, 0.5) <= 1e-9);
}
