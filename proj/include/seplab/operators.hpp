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

// Measurement operators H = [A B]: the fixed full-rank block B, the random
// block A, coherence and ball volumes.

#ifndef SEPLAB_OPERATORS_HPP_
#define SEPLAB_OPERATORS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "seplab/common.hpp"

namespace seplab {

enum class BKind { kIdentityEmbed, kDctOrthonormal, kHadamardScaled, kCustom };

std::string_view ToString(BKind kind);
BKind ParseBKind(std::string_view name);

// k x l matrix of rank l. `custom` is only read for BKind::kCustom.
Matrix BuildB(BKind kind, std::size_t k, std::size_t l,
              const Matrix& custom = Matrix());

// k x k orthonormal DCT-II basis; column j is the j-th cosine atom.
Matrix DctBasis(std::size_t k);

// Sylvester Hadamard matrix scaled by 1/sqrt(k); k must be a power of two.
Matrix HadamardBasis(std::size_t k);

enum class ALaw { kUniformBall, kGaussian };

struct RandomMatrixSpec {
  ALaw law = ALaw::kUniformBall;
  // Ball radius r for kUniformBall, standard deviation for kGaussian.
  double scale = 1.0;

  void Validate() const;
};

std::string_view ToString(ALaw law);
ALaw ParseALaw(std::string_view name);

// k x m matrix with i.i.d. rows. Row i uses Rng(DeriveSeed(seed, i)).
// Uniform-ball rows are drawn by radius-power sampling: a Gaussian direction
// scaled by r * U^(1/m) with U uniform on [0, 1), so every row lies in the
// open ball of radius r.
Matrix SampleA(const RandomMatrixSpec& spec, std::size_t k, std::size_t m,
               std::uint64_t seed);

// H = [A B] with rank(B) = l and k >= l enforced on construction.
class MeasurementPair {
 public:
  MeasurementPair(Matrix a, Matrix b);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& h() const { return h_; }

  std::size_t k() const { return static_cast<std::size_t>(h_.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(h_.cols()); }
  // Number of columns of B (the length of the z part).
  std::size_t split() const { return static_cast<std::size_t>(b_.cols()); }

  // New pair with extra rows appended to both blocks.
  MeasurementPair WithExtraRows(const Matrix& a_rows,
                                const Matrix& b_rows) const;

 private:
  Matrix a_;
  Matrix b_;
  Matrix h_;
};

// Largest |<a_i, b_j>| over unit-norm columns. Throws PreconditionError if a
// column norm differs from 1 by more than 1e-10.
double Coherence(const Matrix& a, const Matrix& b);

// Volume of the n-dimensional ball of radius r.
double BallVolume(std::size_t n, double r);

// Orthonormal basis of the numerical kernel of m (columns of the result).
Matrix KernelBasis(const Matrix& m);

}  // namespace seplab

#endif  // SEPLAB_OPERATORS_HPP_
