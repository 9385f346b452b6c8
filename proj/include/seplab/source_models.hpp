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

// Concatenated source vectors x = [y; z] built from mixed discrete-continuous
// component laws, plus the clipping construction used for declipping.

#ifndef SEPLAB_SOURCE_MODELS_HPP_
#define SEPLAB_SOURCE_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "seplab/common.hpp"
#include "seplab/rng.hpp"

namespace seplab {

struct UniformLaw {
  double lo = -1.0;
  double hi = 1.0;
};

struct GaussianLaw {
  double mean = 0.0;
  double sd = 1.0;
};

using ContinuousLaw = std::variant<UniformLaw, GaussianLaw>;

double Draw(const ContinuousLaw& law, Rng& rng);
void Validate(const ContinuousLaw& law);

struct Atom {
  double value = 0.0;
  double weight = 1.0;
};

// (1 - rho) * discrete(atoms) + rho * continuous(law).
struct MixtureSpec {
  double rho = 0.0;
  std::vector<Atom> atoms{{0.0, 1.0}};
  ContinuousLaw law = UniformLaw{};

  // Throws ConfigError on any invariant violation.
  void Validate() const;
  // True when the discrete part is a Dirac mass at zero.
  bool IsSparse() const;
  double Draw(Rng& rng) const;
};

struct ConcatSpec {
  MixtureSpec spec_y;
  MixtureSpec spec_z;
  double lambda = 0.0;

  void Validate() const;
  // l(n) = floor(lambda * n), the length of the z part.
  std::size_t Split(std::size_t n) const;
};

// Split index for a given fraction, shared by every module that needs l(n).
std::size_t SplitIndex(double lambda, std::size_t n);

struct SignalSample {
  Vector x;
  // Length of the z part; y = x.head(n - split), z = x.tail(split).
  std::size_t split = 0;

  std::size_t n() const { return static_cast<std::size_t>(x.size()); }
  auto y() const { return x.head(x.size() - static_cast<Eigen::Index>(split)); }
  auto z() const { return x.tail(static_cast<Eigen::Index>(split)); }
};

struct DeclipSpec {
  // Rows are the signal dimension, columns the coefficient dimension.
  Matrix dictionary;
  double amplitude = 1.0;
  MixtureSpec coeff_model;
  // When set, every coefficient vector has exactly this many nonzeros, drawn
  // from coeff_model.law on a uniformly random support.
  std::optional<std::size_t> coeff_sparsity;

  void Validate() const;
};

// Draws x with independent entries. Entry i uses the stream
// Rng(DeriveSeed(seed, i)), so any subset of entries can be regenerated in
// any order.
SignalSample SampleConcat(const ConcatSpec& spec, std::size_t n,
                          std::uint64_t seed);

// x with exactly s_y nonzeros in the y part and s_z in the z part, on
// uniformly random supports, with values from `law` (redrawn if exactly 0).
SignalSample SampleExactSparse(std::size_t n, std::size_t split,
                               std::size_t s_y, std::size_t s_z,
                               const ContinuousLaw& law, std::uint64_t seed);

// Entrywise clipping to [-a, a].
Vector Clip(const Vector& v, double a);

// x = [y; z] with z = clip(D y, a) - D y. Does not run the dictionary rank
// check; run DeclipSpec::Validate once beforehand.
SignalSample SampleDeclip(const DeclipSpec& spec, std::uint64_t seed);

// Number of entries with |v_i| > tol. Source entries use tol = 0.
std::size_t CountNonzeros(const Eigen::Ref<const Vector>& v, double tol = 0.0);

struct RateEstimate {
  double epsilon = 0.0;
  std::size_t n = 0;
  std::size_t s_star = 0;
  double rate = 0.0;       // s_star / n
  double asymptote = 0.0;  // (1 - lambda) rho_y + lambda rho_z
};

// Exact law of the nonzero count of a sparse-regime sample: the convolution
// of Bin(n - l, rho_y) and Bin(l, rho_z). Index s holds P[#nonzeros = s].
std::vector<double> NonzeroCountPmf(const ConcatSpec& spec, std::size_t n);

// Bin(trials, p) probability mass function.
std::vector<double> BinomialPmf(std::size_t trials, double p);

// Smallest s with P[count <= s] >= 1 - epsilon under `pmf`.
std::size_t PmfQuantile(const std::vector<double>& pmf, double epsilon);

// Finite-n compression rate of a sparse mixed source. Throws
// UnsupportedModelError when a discrete part is not a Dirac mass at 0.
RateEstimate FiniteRate(const ConcatSpec& spec, std::size_t n, double epsilon);

}  // namespace seplab

#endif  // SEPLAB_SOURCE_MODELS_HPP_
