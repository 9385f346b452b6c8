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

#include "seplab/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "seplab/rng.hpp"

namespace seplab {

namespace {

bool IsPowerOfTwo(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

std::string_view ToString(BKind kind) {
  switch (kind) {
    case BKind::kIdentityEmbed:
      return "identity_embed";
    case BKind::kDctOrthonormal:
      return "dct_orthonormal";
    case BKind::kHadamardScaled:
      return "hadamard_scaled";
    case BKind::kCustom:
      return "custom";
  }
  return "unknown";
}

BKind ParseBKind(std::string_view name) {
  if (name == "identity_embed") return BKind::kIdentityEmbed;
  if (name == "dct_orthonormal") return BKind::kDctOrthonormal;
  if (name == "hadamard_scaled") return BKind::kHadamardScaled;
  if (name == "custom") return BKind::kCustom;
  throw ConfigError("unknown B kind '" + std::string(name) + "'");
}

Matrix DctBasis(std::size_t k) {
  Matrix c(k, k);
  const double kd = static_cast<double>(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double scale = j == 0 ? std::sqrt(1.0 / kd) : std::sqrt(2.0 / kd);
    for (std::size_t i = 0; i < k; ++i) {
      c(i, j) = scale * std::cos(std::numbers::pi *
                                 (2.0 * static_cast<double>(i) + 1.0) *
                                 static_cast<double>(j) / (2.0 * kd));
    }
  }
  return c;
}

Matrix HadamardBasis(std::size_t k) {
  if (!IsPowerOfTwo(k))
    throw DimensionError("Hadamard size must be a power of two");
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  while (static_cast<std::size_t>(h.rows()) < k) {
    const Eigen::Index m = h.rows();
    Matrix next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h / std::sqrt(static_cast<double>(k));
}

Matrix BuildB(BKind kind, std::size_t k, std::size_t l, const Matrix& custom) {
  if (kind == BKind::kCustom) {
    if (static_cast<std::size_t>(custom.rows()) != k ||
        static_cast<std::size_t>(custom.cols()) != l)
      throw DimensionError("custom B has the wrong shape");
    if (k < l) throw DimensionError("B needs k >= l");
    if (NumericalRank(custom) != custom.cols())
      throw ConfigError("custom B is rank deficient");
    return custom;
  }
  if (l < 1) throw DimensionError("B needs at least one column");
  if (k < l) {
    std::ostringstream msg;
    msg << "B needs k >= l, got k=" << k << ", l=" << l;
    throw DimensionError(msg.str());
  }
  const auto ki = static_cast<Eigen::Index>(k);
  const auto li = static_cast<Eigen::Index>(l);
  switch (kind) {
    case BKind::kIdentityEmbed:
      return Matrix::Identity(ki, li);
    case BKind::kDctOrthonormal:
      return DctBasis(k).leftCols(li);
    case BKind::kHadamardScaled:
      return HadamardBasis(k).leftCols(li);
    case BKind::kCustom:
      break;
  }
  throw ConfigError("unhandled B kind");
}

void RandomMatrixSpec::Validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ConfigError("random matrix scale must be positive");
}

std::string_view ToString(ALaw law) {
  return law == ALaw::kUniformBall ? "uniform_ball" : "gaussian";
}

ALaw ParseALaw(std::string_view name) {
  if (name == "uniform_ball") return ALaw::kUniformBall;
  if (name == "gaussian") return ALaw::kGaussian;
  throw ConfigError("unknown A law '" + std::string(name) + "'");
}

Matrix SampleA(const RandomMatrixSpec& spec, std::size_t k, std::size_t m,
               std::uint64_t seed) {
  spec.Validate();
  Matrix a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  if (m == 0) return a;
  Vector row(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < k; ++i) {
    Rng rng(DeriveSeed(seed, i));
    for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = rng.Normal();
    if (spec.law == ALaw::kUniformBall) {
      const double radius =
          spec.scale *
          std::pow(rng.Uniform01(), 1.0 / static_cast<double>(m));
      row *= radius / row.norm();
    } else {
      row *= spec.scale;
    }
    a.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return a;
}

MeasurementPair::MeasurementPair(Matrix a, Matrix b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.rows()) {
    // An empty block may come in as 0 x 0; give it the right row count.
    if (a_.size() == 0 && a_.cols() == 0) {
      a_.resize(b_.rows(), 0);
    } else if (b_.size() == 0 && b_.cols() == 0) {
      b_.resize(a_.rows(), 0);
    } else {
      throw DimensionError("A and B must have the same number of rows");
    }
  }
  if (b_.cols() > b_.rows()) throw DimensionError("H = [A B] needs k >= l");
  if (b_.cols() > 0 && NumericalRank(b_) != b_.cols())
    throw ConfigError("B must have full column rank");
  h_.resize(a_.rows(), a_.cols() + b_.cols());
  h_ << a_, b_;
}

MeasurementPair MeasurementPair::WithExtraRows(const Matrix& a_rows,
                                               const Matrix& b_rows) const {
  if (a_rows.cols() != a_.cols() || b_rows.cols() != b_.cols() ||
      a_rows.rows() != b_rows.rows())
    throw DimensionError("appended rows do not match the pair");
  Matrix a(a_.rows() + a_rows.rows(), a_.cols());
  a << a_, a_rows;
  Matrix b(b_.rows() + b_rows.rows(), b_.cols());
  b << b_, b_rows;
  return MeasurementPair(std::move(a), std::move(b));
}

double Coherence(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw DimensionError("coherence needs matching column lengths");
  constexpr double kUnitTol = 1e-10;
  for (const Matrix* m : {&a, &b}) {
    for (Eigen::Index j = 0; j < m->cols(); ++j) {
      if (std::abs(m->col(j).norm() - 1.0) > kUnitTol)
        throw PreconditionError("coherence needs unit-norm columns");
    }
  }
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  return (a.transpose() * b).cwiseAbs().maxCoeff();
}

double BallVolume(std::size_t n, double r) {
  const double half = 0.5 * static_cast<double>(n);
  if (n <= 100) {
    return std::pow(std::numbers::pi, half) *
           std::pow(r, static_cast<double>(n)) / std::tgamma(half + 1.0);
  }
  return std::exp(half * std::log(std::numbers::pi) +
                  static_cast<double>(n) * std::log(r) -
                  std::lgamma(half + 1.0));
}

Matrix KernelBasis(const Matrix& m) {
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol = RankTolerance(sv(0), m.rows(), m.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace seplab
