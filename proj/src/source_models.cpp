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

#include "seplab/source_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace seplab {

namespace {

constexpr double kWeightSumTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double Draw(const ContinuousLaw& law, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const UniformLaw& u) { return rng.Uniform(u.lo, u.hi); },
          [&](const GaussianLaw& g) { return g.mean + g.sd * rng.Normal(); },
      },
      law);
}

void Validate(const ContinuousLaw& law) {
  std::visit(Overloaded{
                 [](const UniformLaw& u) {
                   if (!(u.lo < u.hi))
                     throw ConfigError("uniform law requires lo < hi");
                 },
                 [](const GaussianLaw& g) {
                   if (!(g.sd > 0.0) || !std::isfinite(g.mean))
                     throw ConfigError("gaussian law requires sd > 0");
                 },
             },
             law);
}

void MixtureSpec::Validate() const {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw ConfigError("mixture weight rho must lie in [0, 1]");
  if (atoms.empty()) throw ConfigError("mixture needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.value))
      throw ConfigError("atom weights must be nonnegative and values finite");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg << "atom weights sum to " << total << ", expected 1";
    throw ConfigError(msg.str());
  }
  seplab::Validate(law);
}

bool MixtureSpec::IsSparse() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) {
    return a.value == 0.0 || a.weight == 0.0;
  });
}

double MixtureSpec::Draw(Rng& rng) const {
  if (rng.Uniform01() < rho) return seplab::Draw(law, rng);
  double u = rng.Uniform01();
  for (const Atom& a : atoms) {
    if (u < a.weight) return a.value;
    u -= a.weight;
  }
  // Weight-sum rounding lands here; fall back to the last positive atom.
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it)
    if (it->weight > 0.0) return it->value;
  return atoms.back().value;
}

std::size_t SplitIndex(double lambda, std::size_t n) {
  // The 1e-9 guard keeps products like 0.3 * 20 from flooring to 5.
  const double raw = std::floor(lambda * static_cast<double>(n) + 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, raw)));
}

void ConcatSpec::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("lambda must lie in [0, 1]");
  spec_y.Validate();
  spec_z.Validate();
}

std::size_t ConcatSpec::Split(std::size_t n) const {
  return SplitIndex(lambda, n);
}

SignalSample SampleConcat(const ConcatSpec& spec, std::size_t n,
                          std::uint64_t seed) {
  spec.Validate();
  if (n == 0) throw ConfigError("sample length n must be positive");
  SignalSample out;
  out.split = spec.Split(n);
  out.x.resize(static_cast<Eigen::Index>(n));
  const std::size_t y_len = n - out.split;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(DeriveSeed(seed, i));
    const MixtureSpec& m = i < y_len ? spec.spec_y : spec.spec_z;
    out.x(static_cast<Eigen::Index>(i)) = m.Draw(rng);
  }
  return out;
}

namespace {

// Writes `count` nonzeros into x[offset, offset + len) on a random support.
void FillSparse(Vector& x, std::size_t offset, std::size_t len,
                std::size_t count, const ContinuousLaw& law, Rng& rng) {
  std::vector<std::size_t> idx(len);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count; ++i)
    std::swap(idx[i], idx[i + rng.Below(len - i)]);
  for (std::size_t i = 0; i < count; ++i) {
    double v = 0.0;
    while (v == 0.0) v = seplab::Draw(law, rng);
    x(static_cast<Eigen::Index>(offset + idx[i])) = v;
  }
}

}  // namespace

SignalSample SampleExactSparse(std::size_t n, std::size_t split,
                               std::size_t s_y, std::size_t s_z,
                               const ContinuousLaw& law, std::uint64_t seed) {
  seplab::Validate(law);
  if (split > n) throw DimensionError("split exceeds n");
  if (s_y > n - split || s_z > split)
    throw DimensionError("sparsity exceeds the block length");
  SignalSample out;
  out.split = split;
  out.x = Vector::Zero(static_cast<Eigen::Index>(n));
  Rng y_rng(DeriveSeed(seed, 0));
  Rng z_rng(DeriveSeed(seed, 1));
  FillSparse(out.x, 0, n - split, s_y, law, y_rng);
  FillSparse(out.x, n - split, split, s_z, law, z_rng);
  return out;
}

Vector Clip(const Vector& v, double a) {
  if (!(a > 0.0)) throw ConfigError("clipping amplitude must be positive");
  return v.cwiseMax(-a).cwiseMin(a);
}

void DeclipSpec::Validate() const {
  if (!(amplitude > 0.0)) throw ConfigError("clipping amplitude must be > 0");
  if (dictionary.rows() == 0 || dictionary.cols() == 0)
    throw ConfigError("dictionary must be nonempty");
  if (!dictionary.allFinite())
    throw ConfigError("dictionary entries must be finite");
  if (NumericalRank(dictionary) < dictionary.cols())
    throw ConfigError("dictionary must have full column rank");
  coeff_model.Validate();
  if (!coeff_model.IsSparse())
    throw ConfigError("declipping coefficient model needs a Dirac at 0");
  if (coeff_sparsity &&
      *coeff_sparsity > static_cast<std::size_t>(dictionary.cols()))
    throw ConfigError("coefficient sparsity exceeds dictionary width");
}

SignalSample SampleDeclip(const DeclipSpec& spec, std::uint64_t seed) {
  // The rank check in Validate is too costly per sample; callers run it once.
  if (!(spec.amplitude > 0.0))
    throw ConfigError("clipping amplitude must be > 0");
  if (spec.coeff_sparsity &&
      *spec.coeff_sparsity > static_cast<std::size_t>(spec.dictionary.cols()))
    throw ConfigError("coefficient sparsity exceeds dictionary width");
  const auto cols = static_cast<std::size_t>(spec.dictionary.cols());
  Vector y = Vector::Zero(static_cast<Eigen::Index>(cols));
  if (spec.coeff_sparsity) {
    std::vector<std::size_t> idx(cols);
    std::iota(idx.begin(), idx.end(), 0);
    Rng support_rng(DeriveSeed(seed, cols, 1));
    // Partial Fisher-Yates; the first s slots are the support.
    for (std::size_t i = 0; i < *spec.coeff_sparsity; ++i) {
      const std::size_t j = i + support_rng.Below(cols - i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < *spec.coeff_sparsity; ++i) {
      Rng rng(DeriveSeed(seed, idx[i]));
      double v = 0.0;
      while (v == 0.0) v = seplab::Draw(spec.coeff_model.law, rng);
      y(static_cast<Eigen::Index>(idx[i])) = v;
    }
  } else {
    for (std::size_t i = 0; i < cols; ++i) {
      Rng rng(DeriveSeed(seed, i));
      y(static_cast<Eigen::Index>(i)) = spec.coeff_model.Draw(rng);
    }
  }
  const Vector signal = spec.dictionary * y;
  const Vector z = Clip(signal, spec.amplitude) - signal;

  SignalSample out;
  out.split = static_cast<std::size_t>(signal.size());
  out.x.resize(y.size() + z.size());
  out.x << y, z;
  return out;
}

std::size_t CountNonzeros(const Eigen::Ref<const Vector>& v, double tol) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > tol) ++count;
  return count;
}

std::vector<double> BinomialPmf(std::size_t trials, double p) {
  std::vector<double> pmf(trials + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[trials] = 1.0;
    return pmf;
  }
  const double nt = static_cast<double>(trials);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (std::size_t s = 0; s <= trials; ++s) {
    const double ds = static_cast<double>(s);
    pmf[s] = std::exp(std::lgamma(nt + 1.0) - std::lgamma(ds + 1.0) -
                      std::lgamma(nt - ds + 1.0) + ds * lp + (nt - ds) * lq);
  }
  return pmf;
}

std::vector<double> NonzeroCountPmf(const ConcatSpec& spec, std::size_t n) {
  const std::size_t split = spec.Split(n);
  const std::vector<double> py = BinomialPmf(n - split, spec.spec_y.rho);
  const std::vector<double> pz = BinomialPmf(split, spec.spec_z.rho);
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 0; i < py.size(); ++i) {
    if (py[i] == 0.0) continue;
    for (std::size_t j = 0; j < pz.size(); ++j) out[i + j] += py[i] * pz[j];
  }
  return out;
}

std::size_t PmfQuantile(const std::vector<double>& pmf, double epsilon) {
  // Absorbs rounding in the cumulative sum, e.g. CDF = 0.5 - 1e-17.
  constexpr double kSlack = 1e-12;
  double cdf = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    cdf += pmf[s];
    if (cdf >= 1.0 - epsilon - kSlack) return s;
  }
  return pmf.empty() ? 0 : pmf.size() - 1;
}

RateEstimate FiniteRate(const ConcatSpec& spec, std::size_t n,
                        double epsilon) {
  spec.Validate();
  if (n == 0) throw ConfigError("n must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1)");
  if (!spec.spec_y.IsSparse() || !spec.spec_z.IsSparse())
    throw UnsupportedModelError(
        "finite rate needs discrete parts equal to a Dirac mass at 0");
  RateEstimate est;
  est.epsilon = epsilon;
  est.n = n;
  est.s_star = PmfQuantile(NonzeroCountPmf(spec, n), epsilon);
  est.rate = static_cast<double>(est.s_star) / static_cast<double>(n);
  est.asymptote =
      (1.0 - spec.lambda) * spec.spec_y.rho + spec.lambda * spec.spec_z.rho;
  return est;
}

}  // namespace seplab
