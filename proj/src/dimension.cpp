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

#include "seplab/dimension.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "seplab/rng.hpp"

namespace seplab {

// ---------------------------------------------------------------------------
// PointCloud

PointCloud::PointCloud(Matrix points) : points_(std::move(points)) {
  if (points_.cols() == 0 || points_.rows() == 0)
    throw ConfigError("point cloud must be nonempty");
  if (!points_.allFinite())
    throw ConfigError("point cloud entries must be finite");
  radius_ = points_.colwise().norm().maxCoeff();
}

PointCloud PointCloud::FromPoints(const std::vector<Vector>& points) {
  if (points.empty()) throw ConfigError("point cloud must be nonempty");
  Matrix m(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != m.rows())
      throw DimensionError("point cloud dimensions differ");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return PointCloud(std::move(m));
}

PointCloud PointCloud::Translated(const Vector& shift) const {
  if (shift.size() != points_.rows())
    throw DimensionError("translation has the wrong dimension");
  return PointCloud(points_.colwise() + shift);
}

PointCloud PointCloud::Scaled(double factor) const {
  return PointCloud(points_ * factor);
}

PointCloud PointCloud::Prefix(std::size_t count) const {
  count = std::min(count, size());
  return PointCloud(points_.leftCols(static_cast<Eigen::Index>(count)));
}

// ---------------------------------------------------------------------------
// Minimum enclosing ball

namespace {

Ball BallThrough(const Matrix& pts, const std::vector<std::size_t>& boundary) {
  Ball ball;
  if (boundary.empty()) return ball;
  const Vector p0 = pts.col(static_cast<Eigen::Index>(boundary[0]));
  if (boundary.size() == 1) {
    ball.center = p0;
    ball.radius = 0.0;
    return ball;
  }
  // Circumcentre in the affine hull: c = p0 + M t with 2 M^T M t = |m_i|^2.
  const auto m = static_cast<Eigen::Index>(boundary.size() - 1);
  Matrix diffs(pts.rows(), m);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    diffs.col(i) =
        pts.col(static_cast<Eigen::Index>(boundary[static_cast<std::size_t>(i) + 1])) - p0;
    rhs(i) = diffs.col(i).squaredNorm();
  }
  const Matrix gram = 2.0 * diffs.transpose() * diffs;
  const Vector t = gram.completeOrthogonalDecomposition().solve(rhs);
  ball.center = p0 + diffs * t;
  ball.radius = 0.0;
  for (std::size_t idx : boundary) {
    ball.radius = std::max(
        ball.radius,
        (pts.col(static_cast<Eigen::Index>(idx)) - ball.center).norm());
  }
  return ball;
}

bool Contains(const Ball& ball, const Eigen::Ref<const Vector>& p) {
  if (ball.radius < 0.0) return false;
  return (p - ball.center).norm() <=
         ball.radius + 1e-12 * std::max(1.0, ball.radius);
}

Ball Welzl(const Matrix& pts, const std::vector<std::size_t>& subset,
           std::size_t count, std::vector<std::size_t>& boundary) {
  if (count == 0 || boundary.size() == static_cast<std::size_t>(pts.rows()) + 1)
    return BallThrough(pts, boundary);
  const std::size_t p = subset[count - 1];
  Ball ball = Welzl(pts, subset, count - 1, boundary);
  if (Contains(ball, pts.col(static_cast<Eigen::Index>(p)))) return ball;
  boundary.push_back(p);
  ball = Welzl(pts, subset, count - 1, boundary);
  boundary.pop_back();
  return ball;
}

}  // namespace

Ball MinimumEnclosingBall(const Matrix& points,
                          const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> boundary;
  boundary.reserve(static_cast<std::size_t>(points.rows()) + 1);
  return Welzl(points, subset, subset.size(), boundary);
}

// ---------------------------------------------------------------------------
// Covering numbers

namespace {

using Mask = std::uint32_t;

std::vector<std::size_t> MaskIndices(Mask mask) {
  std::vector<std::size_t> out;
  while (mask) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Adjacency lists of the open delta-balls around each point.
std::vector<std::vector<std::size_t>> BallMembers(const PointCloud& cloud,
                                                  double delta) {
  const std::size_t n = cloud.size();
  std::vector<std::vector<std::size_t>> members(n);
  const double d2 = delta * delta;
  for (std::size_t i = 0; i < n; ++i) {
    members[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((cloud.point(i) - cloud.point(j)).squaredNorm() < d2) {
        members[i].push_back(j);
        members[j].push_back(i);
      }
    }
  }
  return members;
}

CoverResult GreedyInSet(const PointCloud& cloud, double delta) {
  const std::size_t n = cloud.size();
  const auto members = BallMembers(cloud, delta);
  std::vector<bool> covered(n, false);
  std::vector<std::size_t> gain(n);
  // Max-heap on (gain, -index): ties go to the lowest index.
  using Entry = std::pair<std::size_t, std::size_t>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < n; ++i) {
    gain[i] = members[i].size();
    heap.emplace(gain[i], i);
  }
  CoverResult result;
  std::size_t remaining = n;
  while (remaining > 0) {
    auto [g, c] = heap.top();
    heap.pop();
    std::size_t fresh = 0;
    for (std::size_t m : members[c]) fresh += covered[m] ? 0 : 1;
    if (fresh != g) {  // stale entry
      heap.emplace(fresh, c);
      continue;
    }
    if (fresh == 0) continue;
    for (std::size_t m : members[c]) {
      if (!covered[m]) {
        covered[m] = true;
        --remaining;
      }
    }
    result.centers.emplace_back(cloud.point(c));
  }
  result.count = result.centers.size();
  result.upper_bound_only = true;
  result.bound_factor = std::log(static_cast<double>(n)) + 1.0;
  return result;
}

CoverResult ExactInSet(const PointCloud& cloud, double delta) {
  const std::size_t n = cloud.size();
  const auto members = BallMembers(cloud, delta);
  std::vector<Mask> cover(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m : members[i]) cover[i] |= Mask{1} << m;
  const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;

  std::vector<std::size_t> best(n);
  std::iota(best.begin(), best.end(), 0);
  std::vector<std::size_t> chosen;
  std::function<void(Mask)> search = [&](Mask covered) {
    if (covered == full) {
      if (chosen.size() < best.size()) best = chosen;
      return;
    }
    if (chosen.size() + 1 >= best.size()) return;
    const auto u = static_cast<std::size_t>(std::countr_zero(~covered & full));
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cover[c] & (Mask{1} << u))) continue;
      chosen.push_back(c);
      search(covered | cover[c]);
      chosen.pop_back();
    }
  };
  search(0);

  CoverResult result;
  for (std::size_t c : best) result.centers.emplace_back(cloud.point(c));
  result.count = best.size();
  return result;
}

CoverResult ExactFree(const PointCloud& cloud, double delta) {
  const std::size_t n = cloud.size();
  const Mask full = (Mask{1} << n) - 1;
  const std::size_t states = std::size_t{1} << n;
  std::vector<char> coverable(states, 0);
  std::vector<Ball> balls(states);
  coverable[0] = 1;
  for (Mask mask = 1; mask <= full; ++mask) {
    // Downward closed: drop the top point first.
    const Mask top = Mask{1} << (31 - std::countl_zero(mask));
    if (!coverable[mask ^ top]) continue;
    balls[mask] = MinimumEnclosingBall(cloud.points(), MaskIndices(mask));
    coverable[mask] = balls[mask].radius < delta ? 1 : 0;
  }
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dp(states, kInf);
  std::vector<Mask> pick(states, 0);
  dp[0] = 0;
  for (Mask mask = 1; mask <= full; ++mask) {
    const Mask low = mask & (~mask + 1);
    const Mask rest = mask ^ low;
    // Enumerate every submask of `rest`, including 0.
    Mask sub = rest;
    while (true) {
      const Mask group = sub | low;
      if (coverable[group] && dp[mask ^ group] != kInf &&
          dp[mask ^ group] + 1 < dp[mask]) {
        dp[mask] = dp[mask ^ group] + 1;
        pick[mask] = group;
      }
      if (sub == 0) break;
      sub = (sub - 1) & rest;
    }
  }
  CoverResult result;
  result.count = dp[full];
  for (Mask mask = full; mask; mask ^= pick[mask])
    result.centers.push_back(balls[pick[mask]].center);
  return result;
}

}  // namespace

CoverResult CoverCount(const PointCloud& cloud, const CoverQuery& query) {
  if (!(query.delta > 0.0)) throw ConfigError("cover radius must be positive");
  if (query.solver == CoverSolver::kGreedy)
    return GreedyInSet(cloud, query.delta);
  if (cloud.size() > kMaxExactCoverPoints) {
    std::ostringstream msg;
    msg << "exact covering limited to " << kMaxExactCoverPoints
        << " points, cloud has " << cloud.size();
    throw CapacityError(msg.str());
  }
  return query.center_mode == CenterMode::kInSet
             ? ExactInSet(cloud, query.delta)
             : ExactFree(cloud, query.delta);
}

// ---------------------------------------------------------------------------
// Box counting

std::size_t GridCount(const PointCloud& cloud, int j) {
  // Scaling by 2^j is exact, so grids at successive j nest exactly.
  const double scale = std::ldexp(1.0, j);
  std::vector<std::vector<std::int64_t>> cells;
  cells.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::vector<std::int64_t> cell(cloud.dim());
    for (std::size_t d = 0; d < cloud.dim(); ++d)
      cell[d] = static_cast<std::int64_t>(
          std::floor(cloud.point(i)(static_cast<Eigen::Index>(d)) * scale));
    cells.push_back(std::move(cell));
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(
      std::unique(cells.begin(), cells.end()) - cells.begin());
}

DimFit BoxDim(const PointCloud& cloud, int j_min, int j_max) {
  if (j_min < 0 || j_max <= j_min)
    throw ConfigError("box_dim needs j_max > j_min >= 0");
  DimFit fit;
  for (int j = j_min; j <= j_max; ++j) {
    LadderRow row{j, std::ldexp(1.0, -j), GridCount(cloud, j)};
    if (!fit.ladder.empty() && row.count < fit.ladder.back().count)
      throw std::logic_error("grid counts must not decrease as j grows");
    fit.ladder.push_back(row);
  }
  const auto m = static_cast<double>(fit.ladder.size());
  double sx = 0, sy = 0;
  for (const auto& r : fit.ladder) {
    sx += r.j;
    sy += std::log2(static_cast<double>(r.count));
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : fit.ladder) {
    const double dx = r.j - mx;
    const double dy = std::log2(static_cast<double>(r.count)) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (fit.ladder.front().count == fit.ladder.back().count) {
    fit.degenerate = true;
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 1.0;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

// ---------------------------------------------------------------------------
// Cloud generators and text I/O

PointCloud UnionSparseCloud(std::size_t n, std::size_t s, std::size_t samples,
                            double radius, std::uint64_t seed) {
  if (s > n) throw DimensionError("sparsity s exceeds ambient dimension n");
  if (n == 0 || samples == 0)
    throw ConfigError("union cloud needs n >= 1 and samples >= 1");
  if (!(radius > 0.0)) throw ConfigError("union cloud radius must be > 0");
  Matrix pts = Matrix::Zero(static_cast<Eigen::Index>(n),
                            static_cast<Eigen::Index>(samples));
  std::vector<std::size_t> idx(n);
  for (std::size_t p = 0; p < samples; ++p) {
    Rng rng(DeriveSeed(seed, p));
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t j = i + rng.Below(n - i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < s; ++i) {
      pts(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(p)) =
          rng.Uniform(-radius, radius);
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud SegmentCloud(std::size_t count, std::size_t d) {
  if (count == 0 || d == 0) throw ConfigError("segment cloud needs points");
  Matrix pts = Matrix::Zero(static_cast<Eigen::Index>(d),
                            static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i)
    pts(0, static_cast<Eigen::Index>(i)) =
        count == 1 ? 0.0
                   : static_cast<double>(i) / static_cast<double>(count - 1);
  return PointCloud(std::move(pts));
}

PointCloud CantorCloud(int depth) {
  if (depth < 0 || depth > 24) throw ConfigError("Cantor depth out of range");
  std::vector<double> left{0.0};
  for (int level = 0; level < depth; ++level) {
    std::vector<double> next;
    next.reserve(left.size() * 2);
    for (double p : left) {
      next.push_back(p / 3.0);
      next.push_back(p / 3.0 + 2.0 / 3.0);
    }
    left = std::move(next);
  }
  std::sort(left.begin(), left.end());
  Matrix pts(1, static_cast<Eigen::Index>(left.size()));
  for (std::size_t i = 0; i < left.size(); ++i)
    pts(0, static_cast<Eigen::Index>(i)) = left[i];
  return PointCloud(std::move(pts));
}

PointCloud ReadCloudText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cloud file '" + path + "'");
  std::vector<Vector> points;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (!ss.eof()) throw IoError("bad number in cloud file '" + path + "'");
    if (vals.empty()) continue;
    points.emplace_back(Eigen::Map<Vector>(vals.data(),
                                           static_cast<Eigen::Index>(vals.size())));
  }
  return PointCloud::FromPoints(points);
}

void WriteCloudText(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t d = 0; d < cloud.dim(); ++d) {
      if (d) out << ' ';
      out << cloud.point(i)(static_cast<Eigen::Index>(d));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace seplab
