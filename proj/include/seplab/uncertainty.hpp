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

// Small-ball concentration for random matrices with i.i.d. uniform-ball rows,
// the null-space margin of H on point clouds, and exhaustive checks of the
// classical two-basis uncertainty principles.

#ifndef SEPLAB_UNCERTAINTY_HPP_
#define SEPLAB_UNCERTAINTY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "seplab/common.hpp"
#include "seplab/dimension.hpp"
#include "seplab/operators.hpp"

namespace seplab {

// Upper bound on P[|A u + v| < delta] for A in R^{k x n} with rows uniform in
// the radius-r ball of R^n:
//
//   (2r)^(k(n-1)) (2 delta)^k / (alpha(n, r)^k |u|^k)
//
// Returned unclamped; it may exceed 1.
double ConcentrationBound(std::size_t n, std::size_t k, double r, double delta,
                          double u_norm);

// Two-sided 99% normal quantile used for every Monte Carlo interval.
inline constexpr double kZ99 = 2.5758293035489004;

struct SmallBallEstimate {
  double delta = 0.0;
  std::size_t hits = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  double ci_half_width = 0.0;
};

// Monte Carlo estimate of P[|A u + v| < delta]. Trial t draws its matrix from
// SampleA(uniform_ball(r), k, n, DeriveSeed(seed, t)).
SmallBallEstimate SmallBallMc(std::size_t n, std::size_t k, double r,
                              const Vector& u, const Vector& v, double delta,
                              std::size_t trials, std::uint64_t seed);

// Same draws evaluated at several radii at once.
std::vector<SmallBallEstimate> SmallBallMcGrid(
    std::size_t n, std::size_t k, double r, const Vector& u, const Vector& v,
    const std::vector<double>& deltas, std::size_t trials, std::uint64_t seed);

struct ConcentrationRow {
  double delta = 0.0;
  double bound = 0.0;  // unclamped
  double p_hat = 0.0;
  double ci = 0.0;
};

struct ConcentrationReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double r = 1.0;
  double u_norm = 0.0;
  std::size_t trials = 0;
  std::vector<ConcentrationRow> rows;

  // p_hat - 3 ci <= bound on every row.
  bool BoundHolds() const;
  // Least-squares slope of log p_hat against log delta; nullopt when some
  // p_hat is zero.
  std::optional<double> LogLogSlope() const;
};

ConcentrationReport RunConcentration(std::size_t n, std::size_t k, double r,
                                     const Vector& u, const Vector& v,
                                     const std::vector<double>& deltas,
                                     std::size_t trials, std::uint64_t seed);

// min over the cloud of |Hx| / |x|. Throws PreconditionError when a point has
// norm <= 1e-12.
double NullspaceMargin(const MeasurementPair& pair, const PointCloud& cloud);

enum class Principle { kDonohoStark, kEladBruckstein };

std::string_view ToString(Principle p);
Principle ParsePrinciple(std::string_view name);

struct UncertaintyViolation {
  std::vector<std::size_t> support_p;
  std::vector<std::size_t> support_q;
  // Stacked [p; q] restricted to the supports, with A_Tp p = B_Tq q.
  Vector witness;
};

struct UncertaintyVerdict {
  Principle principle = Principle::kDonohoStark;
  std::optional<double> mu;
  std::size_t checked_pairs = 0;
  bool sampled = false;
  std::vector<UncertaintyViolation> violations;

  bool Holds() const { return violations.empty(); }
};

// Smallest singular value at or below which [A_Tp  -B_Tq] has a kernel.
inline constexpr double kKernelThreshold = 1e-10;

// Nonzero kernel vector of [A_Tp  -B_Tq], if any.
std::optional<Vector> KernelWitness(const Matrix& a, const Matrix& b,
                                    const std::vector<std::size_t>& tp,
                                    const std::vector<std::size_t>& tq);

// Checks every support pair (T_p, T_q), both nonempty, inside the principle's
// forbidden region: 2 |T_p| |T_q| < n for Donoho-Stark, |T_p| + |T_q| < 2/mu
// for Elad-Bruckstein. Exhaustive for n <= 8 (CapacityError above `budget`
// pairs); larger n draws `budget` pairs at random and marks the verdict as
// sampled.
UncertaintyVerdict ClassicalCheck(const Matrix& a, const Matrix& b,
                                  Principle principle,
                                  std::uint64_t budget = 1'000'000,
                                  std::uint64_t seed = 0);

// Every support pair with exactly the given sizes whose restricted system has
// a kernel. Used to exhibit pairs on the boundary of a forbidden region.
std::vector<UncertaintyViolation> FindKernelPairs(const Matrix& a,
                                                  const Matrix& b,
                                                  std::size_t np,
                                                  std::size_t nq);

}  // namespace seplab

#endif  // SEPLAB_UNCERTAINTY_HPP_
