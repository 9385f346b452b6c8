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

#include "seplab/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "seplab/rng.hpp"

namespace seplab {

double ConcentrationBound(std::size_t n, std::size_t k, double r, double delta,
                          double u_norm) {
  if (!(u_norm > 0.0)) throw PreconditionError("bound needs |u| > 0");
  if (!(delta >= 0.0)) throw PreconditionError("bound needs delta >= 0");
  if (!(r > 0.0) || n == 0) throw PreconditionError("bound needs n, r > 0");
  if (delta == 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  const double log_bound = kd * static_cast<double>(n - 1) * std::log(2.0 * r) +
                           kd * std::log(2.0 * delta) -
                           kd * std::log(BallVolume(n, r)) -
                           kd * std::log(u_norm);
  return std::exp(log_bound);
}

namespace {

double HalfWidth99(std::size_t hits, std::size_t trials) {
  // The +0.5 / +1 shrinkage keeps the interval strictly positive at 0 or N
  // hits; elsewhere it is indistinguishable from the plain normal interval.
  const double p = (static_cast<double>(hits) + 0.5) /
                   (static_cast<double>(trials) + 1.0);
  return kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

std::vector<SmallBallEstimate> SmallBallMcGrid(
    std::size_t n, std::size_t k, double r, const Vector& u, const Vector& v,
    const std::vector<double>& deltas, std::size_t trials, std::uint64_t seed) {
  if (static_cast<std::size_t>(u.size()) != n ||
      static_cast<std::size_t>(v.size()) != k)
    throw DimensionError("u must have length n and v length k");
  if (!(u.norm() > 0.0)) throw PreconditionError("small-ball test needs u != 0");
  if (trials < 1000) throw ConfigError("small-ball test needs >= 1000 trials");
  const RandomMatrixSpec law{ALaw::kUniformBall, r};
  std::vector<std::size_t> hits(deltas.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix a = SampleA(law, k, n, DeriveSeed(seed, t));
    const double value = (a * u + v).norm();
    for (std::size_t i = 0; i < deltas.size(); ++i)
      if (value < deltas[i]) ++hits[i];
  }
  std::vector<SmallBallEstimate> out;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    SmallBallEstimate e;
    e.delta = deltas[i];
    e.hits = hits[i];
    e.trials = trials;
    e.p_hat = static_cast<double>(hits[i]) / static_cast<double>(trials);
    e.ci_half_width = HalfWidth99(hits[i], trials);
    out.push_back(e);
  }
  return out;
}

SmallBallEstimate SmallBallMc(std::size_t n, std::size_t k, double r,
                              const Vector& u, const Vector& v, double delta,
                              std::size_t trials, std::uint64_t seed) {
  return SmallBallMcGrid(n, k, r, u, v, {delta}, trials, seed).front();
}

bool ConcentrationReport::BoundHolds() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConcentrationRow& row) {
    return row.p_hat - 3.0 * row.ci <= row.bound;
  });
}

std::optional<double> ConcentrationReport::LogLogSlope() const {
  if (rows.size() < 2) return std::nullopt;
  double sx = 0, sy = 0;
  for (const auto& row : rows) {
    if (!(row.p_hat > 0.0)) return std::nullopt;
    sx += std::log(row.delta);
    sy += std::log(row.p_hat);
  }
  const double m = static_cast<double>(rows.size());
  double sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    const double dx = std::log(row.delta) - sx / m;
    sxx += dx * dx;
    sxy += dx * (std::log(row.p_hat) - sy / m);
  }
  return sxy / sxx;
}

ConcentrationReport RunConcentration(std::size_t n, std::size_t k, double r,
                                     const Vector& u, const Vector& v,
                                     const std::vector<double>& deltas,
                                     std::size_t trials, std::uint64_t seed) {
  ConcentrationReport report;
  report.n = n;
  report.k = k;
  report.r = r;
  report.u_norm = u.norm();
  report.trials = trials;
  const auto estimates = SmallBallMcGrid(n, k, r, u, v, deltas, trials, seed);
  for (const auto& e : estimates) {
    report.rows.push_back(
        {e.delta, ConcentrationBound(n, k, r, e.delta, report.u_norm), e.p_hat,
         e.ci_half_width});
  }
  return report;
}

double NullspaceMargin(const MeasurementPair& pair, const PointCloud& cloud) {
  if (cloud.dim() != pair.n())
    throw DimensionError("cloud dimension must equal the columns of H");
  const Matrix images = pair.h() * cloud.points();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double norm = cloud.point(i).norm();
    if (norm <= 1e-12)
      throw PreconditionError("null-space margin needs points away from 0");
    margin = std::min(
        margin, images.col(static_cast<Eigen::Index>(i)).norm() / norm);
  }
  return margin;
}

std::string_view ToString(Principle p) {
  return p == Principle::kDonohoStark ? "donoho_stark" : "elad_bruckstein";
}

Principle ParsePrinciple(std::string_view name) {
  if (name == "donoho_stark") return Principle::kDonohoStark;
  if (name == "elad_bruckstein") return Principle::kEladBruckstein;
  throw ConfigError("unknown principle '" + std::string(name) + "'");
}

std::optional<Vector> KernelWitness(const Matrix& a, const Matrix& b,
                                    const std::vector<std::size_t>& tp,
                                    const std::vector<std::size_t>& tq) {
  const auto cols = static_cast<Eigen::Index>(tp.size() + tq.size());
  Matrix m(a.rows(), cols);
  Eigen::Index c = 0;
  for (std::size_t i : tp) m.col(c++) = a.col(static_cast<Eigen::Index>(i));
  for (std::size_t j : tq) m.col(c++) = -b.col(static_cast<Eigen::Index>(j));
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const bool wide = m.cols() > m.rows();
  if (!wide) {
    const Vector& sv = svd.singularValues();
    if (sv(sv.size() - 1) > kKernelThreshold) return std::nullopt;
  }
  return Vector(svd.matrixV().col(cols - 1));
}

namespace {

std::vector<std::vector<std::size_t>> Combinations(std::size_t n,
                                                   std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  if (size > n) return out;
  std::vector<std::size_t> c(size);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back(c);
    std::size_t i = size;
    while (i > 0 && c[i - 1] == n - size + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < size; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

long double Choose(std::size_t n, std::size_t k) {
  long double r = 1;
  for (std::size_t i = 0; i < k; ++i)
    r = r * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
  return r;
}

void RequireOrthonormalSquare(const Matrix& m, const char* name) {
  if (m.rows() != m.cols())
    throw PreconditionError(std::string(name) + " must be square");
  const Matrix gram = m.transpose() * m;
  if ((gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() >
      1e-10)
    throw PreconditionError(std::string(name) + " must be orthonormal");
}

}  // namespace

std::vector<UncertaintyViolation> FindKernelPairs(const Matrix& a,
                                                  const Matrix& b,
                                                  std::size_t np,
                                                  std::size_t nq) {
  const auto n = static_cast<std::size_t>(a.cols());
  std::vector<UncertaintyViolation> out;
  const auto ps = Combinations(n, np);
  const auto qs = Combinations(static_cast<std::size_t>(b.cols()), nq);
  for (const auto& tp : ps) {
    for (const auto& tq : qs) {
      if (auto w = KernelWitness(a, b, tp, tq))
        out.push_back({tp, tq, std::move(*w)});
    }
  }
  return out;
}

UncertaintyVerdict ClassicalCheck(const Matrix& a, const Matrix& b,
                                  Principle principle, std::uint64_t budget,
                                  std::uint64_t seed) {
  RequireOrthonormalSquare(a, "A");
  RequireOrthonormalSquare(b, "B");
  if (a.rows() != b.rows())
    throw DimensionError("A and B must have the same size");
  const auto n = static_cast<std::size_t>(a.rows());

  UncertaintyVerdict verdict;
  verdict.principle = principle;
  verdict.mu = Coherence(a, b);
  // Strict inequality with slack, so mu = 1/2 computed as 0.4999... does not
  // admit n_p + n_q = 4.
  const double eb_limit = 2.0 / *verdict.mu - 1e-9;
  auto forbidden = [&](std::size_t np, std::size_t nq) {
    if (principle == Principle::kDonohoStark) return 2 * np * nq < n;
    return static_cast<double>(np + nq) < eb_limit;
  };

  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  long double total = 0;
  for (std::size_t np = 1; np <= n; ++np) {
    for (std::size_t nq = 1; nq <= n; ++nq) {
      if (!forbidden(np, nq)) continue;
      sizes.emplace_back(np, nq);
      total += Choose(n, np) * Choose(n, nq);
    }
  }

  if (n <= 8) {
    if (total > static_cast<long double>(budget)) {
      std::ostringstream msg;
      msg << "classical check needs " << static_cast<double>(total)
          << " support pairs, budget is " << budget;
      throw CapacityError(msg.str());
    }
    for (auto [np, nq] : sizes) {
      for (const auto& tp : Combinations(n, np)) {
        for (const auto& tq : Combinations(n, nq)) {
          ++verdict.checked_pairs;
          if (auto w = KernelWitness(a, b, tp, tq))
            verdict.violations.push_back({tp, tq, std::move(*w)});
        }
      }
    }
    return verdict;
  }

  verdict.sampled = true;
  if (sizes.empty()) return verdict;
  std::vector<long double> cumulative;
  long double acc = 0;
  for (auto [np, nq] : sizes) {
    acc += Choose(n, np) * Choose(n, nq);
    cumulative.push_back(acc);
  }
  Rng rng(DeriveSeed(seed, n));
  std::vector<std::size_t> idx(n);
  auto draw_subset = [&](std::size_t size) {
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < size; ++i)
      std::swap(idx[i], idx[i + rng.Below(n - i)]);
    std::vector<std::size_t> out(idx.begin(), idx.begin() + size);
    std::sort(out.begin(), out.end());
    return out;
  };
  for (std::uint64_t s = 0; s < budget; ++s) {
    const long double u = static_cast<long double>(rng.Uniform01()) * acc;
    const std::size_t which = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
    const auto [np, nq] = sizes[std::min(which, sizes.size() - 1)];
    const auto tp = draw_subset(np);
    const auto tq = draw_subset(nq);
    ++verdict.checked_pairs;
    if (auto w = KernelWitness(a, b, tp, tq))
      verdict.violations.push_back({tp, tq, std::move(*w)});
  }
  return verdict;
}

}  // namespace seplab
