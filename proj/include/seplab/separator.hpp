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

// Consistency-search separator over sparse joint supports, Hölder-constant
// estimates and the excision ladder check.

#ifndef SEPLAB_SEPARATOR_HPP_
#define SEPLAB_SEPARATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "seplab/common.hpp"
#include "seplab/dimension.hpp"
#include "seplab/operators.hpp"

namespace seplab {

// At most s1 nonzeros in the y part and s2 in the z part.
struct SupportModel {
  std::size_t s1 = 0;
  std::size_t s2 = 0;
};

struct SeparatorOptions {
  // Relative consistency tolerance: residual <= tol * max(1, |w|).
  double tol = 1e-9;
  // Candidates closer than this entrywise are the same candidate.
  double distinct = 1e-7;
  // Relative pivot threshold for the rank of restricted column sets.
  double rank_rel = 1e-9;
  std::uint64_t budget = 1'000'000;
  // Keep enumerating after ambiguity is established, so that `count` is the
  // exact number of distinct candidates. Off by default: the verdict does not
  // change, and a square restricted system can produce thousands of
  // candidates.
  bool exhaustive_count = false;
};

struct Unique {
  Vector x;
  double residual = 0.0;
  std::vector<std::size_t> support;  // column indices of H
};

struct Ambiguous {
  // Distinct consistent candidates seen; a lower bound unless the run was
  // exhaustive and no continuum was found.
  std::size_t count = 2;
  bool continuum = false;  // a rank-deficient support was consistent
  Vector witness_a;
  Vector witness_b;
  std::vector<std::size_t> support_a;
  std::vector<std::size_t> support_b;
};

struct NoneConsistent {};

using SeparationResult = std::variant<Unique, Ambiguous, NoneConsistent>;

// Number of joint supports enumerated for `model`, saturating at UINT64_MAX.
std::uint64_t SupportCount(std::size_t y_len, std::size_t z_len,
                           const SupportModel& model);

// Enumerates every joint support (T_y, T_z) with |T_y| <= s1, |T_z| <= s2,
// fits w on the selected columns of H by least squares, and collects the
// consistent candidates. Throws CapacityError above options.budget supports.
SeparationResult Separate(const MeasurementPair& pair, const Vector& w,
                          const SupportModel& model,
                          const SeparatorOptions& options = {});

// min over point pairs (and each point against 0 when 0 is not in the cloud)
// of |H(u - v)| / |u - v|^(1/beta). Pairs closer than 1e-12 are skipped;
// throws UndefinedEstimateError if nothing is left.
double HolderEstimate(const MeasurementPair& pair, const PointCloud& cloud,
                      double beta);

struct ExcisionLadder {
  double beta = 0.5;
  int j_min = 0;
  int j_max = 12;

  void Validate() const;
};

struct ExcisionRow {
  int j = 0;
  double delta = 0.0;   // 2^-j
  double radius = 0.0;  // delta^beta, the excised ball
  std::optional<double> min_gain;  // empty when no point survives excision
  bool pass = false;
};

struct ExcisionReport {
  std::vector<ExcisionRow> rows;
  // Smallest j from which every tested j passes.
  std::optional<int> j_observed;
};

// For each j: min |Hx| over cloud points with |x| > delta_j^beta, passing when
// that minimum is >= delta_j. An empty excised set passes vacuously.
ExcisionReport ExcisionCheck(const MeasurementPair& pair,
                             const PointCloud& cloud,
                             const ExcisionLadder& ladder);

// (1 - dim / k) > beta.
bool HolderCondition(double dim_value, std::size_t k, double beta);

}  // namespace seplab

#endif  // SEPLAB_SEPARATOR_HPP_
