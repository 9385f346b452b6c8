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

// Covering numbers with free or in-set centers, grid box counting and
// log-log dimension fits on finite point clouds.

#ifndef SEPLAB_DIMENSION_HPP_
#define SEPLAB_DIMENSION_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "seplab/common.hpp"

namespace seplab {

// Finite, nonempty, bounded sample set. Points are stored as the columns of
// a d x count matrix.
class PointCloud {
 public:
  explicit PointCloud(Matrix points);
  static PointCloud FromPoints(const std::vector<Vector>& points);

  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.rows()); }
  auto point(std::size_t i) const {
    return points_.col(static_cast<Eigen::Index>(i));
  }
  const Matrix& points() const { return points_; }
  // Largest point norm.
  double bounding_radius() const { return radius_; }

  PointCloud Translated(const Vector& shift) const;
  PointCloud Scaled(double factor) const;
  // First `count` points.
  PointCloud Prefix(std::size_t count) const;

 private:
  Matrix points_;
  double radius_ = 0.0;
};

enum class CenterMode { kFree, kInSet };
enum class CoverSolver { kExact, kGreedy };

struct CoverQuery {
  double delta = 0.0;
  CenterMode center_mode = CenterMode::kInSet;
  CoverSolver solver = CoverSolver::kExact;
};

struct CoverResult {
  std::size_t count = 0;
  std::vector<Vector> centers;
  // Set for greedy runs; the true minimum is at least
  // count / (ln(|points|) + 1) of the in-set optimum.
  bool upper_bound_only = false;
  double bound_factor = 1.0;
};

// Largest cloud accepted by the exact solvers.
inline constexpr std::size_t kMaxExactCoverPoints = 14;

// Minimum number of open delta-balls covering the cloud. Throws
// CapacityError for exact queries on clouds above kMaxExactCoverPoints.
//
// Exact in-set covers run branch and bound over the point-centred balls.
// Exact free covers use the fact that a group of points fits in one open
// delta-ball iff its minimum enclosing ball has radius < delta, and solve a
// minimum partition into such groups. Greedy covers always use in-set
// centres, which are also admissible free centres.
CoverResult CoverCount(const PointCloud& cloud, const CoverQuery& query);

struct Ball {
  Vector center;
  double radius = -1.0;  // < 0 for the empty ball
};

// Smallest enclosing ball of the listed columns (Welzl's algorithm).
Ball MinimumEnclosingBall(const Matrix& points,
                          const std::vector<std::size_t>& subset);

struct LadderRow {
  int j = 0;
  double delta = 0.0;
  std::size_t count = 0;
};

struct DimFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<LadderRow> ladder;
  // All counts equal; slope forced to 0.
  bool degenerate = false;
};

// Occupied cells of the axis-aligned grid of side 2^-j anchored at 0.
std::size_t GridCount(const PointCloud& cloud, int j);

// Least-squares slope of log2(GridCount) against j for j in [j_min, j_max].
DimFit BoxDim(const PointCloud& cloud, int j_min = 2, int j_max = 7);

// `samples` points in R^n, each with exactly s nonzero coordinates on a
// uniformly random support and values uniform in [-radius, radius].
PointCloud UnionSparseCloud(std::size_t n, std::size_t s, std::size_t samples,
                            double radius, std::uint64_t seed);

// `count` equispaced points on [0, 1] along the first axis of R^d.
PointCloud SegmentCloud(std::size_t count, std::size_t d = 2);

// Left endpoints of the 2^depth intervals of the middle-thirds Cantor
// construction, in R^1.
PointCloud CantorCloud(int depth);

// Whitespace-delimited text, one point per line.
PointCloud ReadCloudText(const std::string& path);
void WriteCloudText(const PointCloud& cloud, const std::string& path);

}  // namespace seplab

#endif  // SEPLAB_DIMENSION_HPP_
