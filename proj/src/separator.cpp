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

#include "seplab/separator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace seplab {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t SatMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t SatAdd(std::uint64_t a, std::uint64_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

// sum_{i <= s} C(n, i), saturating.
std::uint64_t BinomialPrefix(std::size_t n, std::size_t s) {
  std::uint64_t total = 0, term = 1;  // term = C(n, i)
  for (std::size_t i = 0; i <= std::min(s, n); ++i) {
    total = SatAdd(total, term);
    if (term == kSaturated) return kSaturated;
    // C(n, i+1) = C(n, i) * (n - i) / (i + 1); exact in 128 bits.
    const __uint128_t next = static_cast<__uint128_t>(term) * (n - i) / (i + 1);
    term = next > kSaturated ? kSaturated : static_cast<std::uint64_t>(next);
  }
  return total;
}

// All subsets of {offset, ..., offset + n - 1} with at most s elements,
// ordered by size, then lexicographically.
std::vector<std::vector<std::size_t>> SubsetsUpTo(std::size_t n, std::size_t s,
                                                  std::size_t offset) {
  std::vector<std::vector<std::size_t>> out;
  out.emplace_back();
  for (std::size_t size = 1; size <= std::min(s, n); ++size) {
    std::vector<std::size_t> c(size);
    for (std::size_t i = 0; i < size; ++i) c[i] = i;
    while (true) {
      std::vector<std::size_t> shifted(size);
      for (std::size_t i = 0; i < size; ++i) shifted[i] = c[i] + offset;
      out.push_back(std::move(shifted));
      // Advance to the next combination.
      std::size_t i = size;
      while (i > 0 && c[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < size; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

struct Candidate {
  Vector x;
  double residual;
  std::vector<std::size_t> support;
};

}  // namespace

std::uint64_t SupportCount(std::size_t y_len, std::size_t z_len,
                           const SupportModel& model) {
  return SatMul(BinomialPrefix(y_len, model.s1),
                BinomialPrefix(z_len, model.s2));
}

SeparationResult Separate(const MeasurementPair& pair, const Vector& w,
                          const SupportModel& model,
                          const SeparatorOptions& options) {
  const std::size_t k = pair.k();
  const std::size_t n = pair.n();
  const std::size_t z_len = pair.split();
  const std::size_t y_len = n - z_len;
  if (static_cast<std::size_t>(w.size()) != k)
    throw DimensionError("observation length must equal the number of rows");
  if (model.s1 > y_len || model.s2 > z_len)
    throw ConfigError("support model exceeds the block sizes");
  const std::uint64_t supports = SupportCount(y_len, z_len, model);
  if (supports > options.budget) {
    std::ostringstream msg;
    msg << "separator would enumerate " << supports
        << " supports, budget is " << options.budget;
    throw CapacityError(msg.str());
  }

  const Matrix& h = pair.h();
  const double w_norm = w.norm();
  const double threshold = options.tol * std::max(1.0, w_norm);
  const auto y_sets = SubsetsUpTo(y_len, model.s1, 0);
  const auto z_sets = SubsetsUpTo(z_len, model.s2, y_len);

  // Per-size scratch so the inner loop does not reallocate.
  const std::size_t max_t = model.s1 + model.s2;
  std::vector<Matrix> sub(max_t + 1);
  std::vector<Eigen::ColPivHouseholderQR<Matrix>> qr(max_t + 1);
  std::vector<Vector> coef(max_t + 1);
  for (std::size_t t = 1; t <= max_t; ++t) {
    sub[t].resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t));
    qr[t] = Eigen::ColPivHouseholderQR<Matrix>(static_cast<Eigen::Index>(k),
                                               static_cast<Eigen::Index>(t));
    qr[t].setThreshold(options.rank_rel *
                       static_cast<double>(std::max(k, t)));
  }

  std::vector<Candidate> candidates;
  std::optional<Ambiguous> continuum;
  std::vector<std::size_t> support;
  Vector residual_vec(static_cast<Eigen::Index>(k));

  auto padded = [&](const Vector& coeffs) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < support.size(); ++i)
      x(static_cast<Eigen::Index>(support[i])) =
          coeffs(static_cast<Eigen::Index>(i));
    return x;
  };
  auto ambiguous_from_candidates = [&]() {
    Ambiguous amb;
    amb.count = candidates.size();
    amb.witness_a = candidates[0].x;
    amb.witness_b = candidates[1].x;
    amb.support_a = candidates[0].support;
    amb.support_b = candidates[1].support;
    return amb;
  };

  for (const auto& ty : y_sets) {
    for (const auto& tz : z_sets) {
      support.assign(ty.begin(), ty.end());
      support.insert(support.end(), tz.begin(), tz.end());
      const std::size_t t = support.size();

      Vector x;
      double residual;
      if (t == 0) {
        x = Vector::Zero(static_cast<Eigen::Index>(n));
        residual = w_norm;
        if (residual > threshold) continue;
      } else {
        Matrix& ht = sub[t];
        for (std::size_t i = 0; i < t; ++i)
          ht.col(static_cast<Eigen::Index>(i)) =
              h.col(static_cast<Eigen::Index>(support[i]));
        qr[t].compute(ht);
        coef[t] = qr[t].solve(w);
        residual_vec.noalias() = w - ht * coef[t];
        residual = residual_vec.norm();
        if (residual > threshold) continue;
        if (qr[t].rank() < static_cast<Eigen::Index>(t)) {
          // The consistent set on this support is an affine continuum.
          Eigen::JacobiSVD<Matrix> svd(ht, Eigen::ComputeFullV);
          const Vector null_dir = svd.matrixV().col(ht.cols() - 1);
          Ambiguous amb;
          amb.continuum = true;
          amb.count = 2;
          amb.witness_a = padded(coef[t]);
          amb.witness_b = padded(coef[t] + null_dir);
          amb.support_a = support;
          amb.support_b = support;
          if (!options.exhaustive_count) return amb;
          if (!continuum) continuum = std::move(amb);
          continue;
        }
        x = padded(coef[t]);
      }

      bool merged = false;
      for (Candidate& c : candidates) {
        if ((c.x - x).cwiseAbs().maxCoeff() <= options.distinct) {
          if (t < c.support.size()) c = Candidate{x, residual, support};
          merged = true;
          break;
        }
      }
      if (merged) continue;
      candidates.push_back(Candidate{std::move(x), residual, support});
      if (candidates.size() >= 2 && !options.exhaustive_count)
        return ambiguous_from_candidates();
    }
  }

  if (continuum) {
    continuum->count = std::max<std::size_t>(2, candidates.size());
    return *continuum;
  }
  if (candidates.empty()) return NoneConsistent{};
  if (candidates.size() == 1) {
    Candidate& c = candidates.front();
    return Unique{std::move(c.x), c.residual, std::move(c.support)};
  }
  return ambiguous_from_candidates();
}

double HolderEstimate(const MeasurementPair& pair, const PointCloud& cloud,
                      double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw ConfigError("Hölder exponent must lie in (0, 1]");
  if (cloud.dim() != pair.n())
    throw DimensionError("cloud dimension must equal the columns of H");
  constexpr double kDegenerate = 1e-12;
  const double power = 1.0 / beta;
  const Matrix images = pair.h() * cloud.points();
  const std::size_t count = cloud.size();
  double best = std::numeric_limits<double>::infinity();
  // Against the origin; when 0 is itself a cloud point this repeats pairs
  // that the loop below already covers, which leaves the minimum unchanged.
  for (std::size_t i = 0; i < count; ++i) {
    const double dist = cloud.point(i).norm();
    if (dist <= kDegenerate) continue;
    best = std::min(best, images.col(static_cast<Eigen::Index>(i)).norm() /
                              std::pow(dist, power));
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double dist = (cloud.point(i) - cloud.point(j)).norm();
      if (dist <= kDegenerate) continue;
      const double gain = (images.col(static_cast<Eigen::Index>(i)) -
                           images.col(static_cast<Eigen::Index>(j)))
                              .norm();
      best = std::min(best, gain / std::pow(dist, power));
    }
  }
  if (!std::isfinite(best))
    throw UndefinedEstimateError("every point pair is degenerate");
  return best;
}

void ExcisionLadder::Validate() const {
  if (!(beta > 0.0 && beta < 1.0))
    throw ConfigError("excision ladder needs beta in (0, 1)");
  if (j_min < 0 || j_max < j_min)
    throw ConfigError("excision ladder needs 0 <= j_min <= j_max");
}

ExcisionReport ExcisionCheck(const MeasurementPair& pair,
                             const PointCloud& cloud,
                             const ExcisionLadder& ladder) {
  ladder.Validate();
  if (cloud.dim() != pair.n())
    throw DimensionError("cloud dimension must equal the columns of H");
  const Matrix images = pair.h() * cloud.points();
  const Eigen::RowVectorXd norms = cloud.points().colwise().norm();
  const Eigen::RowVectorXd gains = images.colwise().norm();

  ExcisionReport report;
  for (int j = ladder.j_min; j <= ladder.j_max; ++j) {
    ExcisionRow row;
    row.j = j;
    row.delta = std::ldexp(1.0, -j);
    row.radius = std::pow(row.delta, ladder.beta);
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
      if (norms(i) > row.radius)
        row.min_gain = std::min(row.min_gain.value_or(gains(i)), gains(i));
    }
    row.pass = !row.min_gain || *row.min_gain >= row.delta;
    report.rows.push_back(row);
  }
  for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
    if (!it->pass) break;
    report.j_observed = it->j;
  }
  return report;
}

bool HolderCondition(double dim_value, std::size_t k, double beta) {
  if (k == 0) throw ConfigError("measurement count k must be positive");
  return (1.0 - dim_value / static_cast<double>(k)) > beta;
}

}  // namespace seplab
