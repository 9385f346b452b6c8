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

// Configuration-driven experiments and their CSV/JSON reports.

#ifndef SEPLAB_HARNESS_HPP_
#define SEPLAB_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seplab/dimension.hpp"
#include "seplab/operators.hpp"
#include "seplab/separator.hpp"
#include "seplab/source_models.hpp"
#include "seplab/uncertainty.hpp"

namespace seplab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON <-> domain types. Field names: rho, atoms, law, lambda.

void to_json(Json& j, const ContinuousLaw& law);
void from_json(const Json& j, ContinuousLaw& law);
void to_json(Json& j, const MixtureSpec& spec);
void from_json(const Json& j, MixtureSpec& spec);
void to_json(Json& j, const ConcatSpec& spec);
void from_json(const Json& j, ConcatSpec& spec);

// ---------------------------------------------------------------------------
// Phase sweeps and declipping

enum class SourceMode { kExactSparsity, kMixture, kDeclip };

struct Tolerances {
  double fit = 1e-9;
  double distinct = 1e-7;
  double rank = 1e-9;
};

// Assertions evaluated on a finished curve; any failure makes the CLI exit 1.
struct CurveCheck {
  std::size_t k = 0;
  std::optional<double> min_success_rate;
  std::optional<double> max_success_rate;
  std::optional<double> min_ambiguous_rate;
};

struct ExperimentConfig {
  std::size_t n = 0;
  double lambda = 0.0;
  SourceMode mode = SourceMode::kExactSparsity;
  // Nonzero values in exact-sparsity mode.
  ContinuousLaw value_law = UniformLaw{-1.0, 1.0};
  ConcatSpec concat;  // mixture mode; concat.lambda mirrors lambda
  DeclipSpec declip;  // declip mode
  // Either an explicit model or a quantile level epsilon.
  std::optional<SupportModel> support;
  std::optional<double> epsilon;
  BKind b_kind = BKind::kDctOrthonormal;
  Matrix custom_b;
  RandomMatrixSpec a_law;
  std::vector<std::size_t> k_values;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  double kappa = 0.0;
  std::uint64_t budget = 1'000'000;
  std::vector<CurveCheck> checks;
  std::optional<double> max_isotonic_violation;
  std::string output;
  std::string format = "csv";
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  // Declip only.
  std::size_t pilot_samples = 2000;
  std::size_t cloud_samples = 2000;
  int j_min = 2;
  int j_max = 7;

  std::size_t Split() const { return SplitIndex(lambda, n); }
  void Validate() const;
};

ExperimentConfig ParseExperimentConfig(const Json& j);

struct PhaseRow {
  std::size_t k = 0;
  double rate = 0.0;  // k / n
  std::size_t successes = 0;
  std::size_t ambiguous = 0;
  std::size_t none_consistent = 0;
  std::size_t wrong = 0;  // Unique but not the source
  std::size_t trials = 0;
  double success_rate = 0.0;
  double ci_lo = 0.0;  // Wilson 95%
  double ci_hi = 0.0;
};

struct PhaseCurve {
  std::size_t n = 0;
  std::size_t split = 0;
  SupportModel model;
  std::optional<RateEstimate> predicted;
  double kappa = 0.0;
  std::vector<PhaseRow> rows;
  std::vector<std::string> check_failures;

  // Weighted mean absolute gap between success_rate and its isotonic
  // (nondecreasing in k) regression.
  double IsotonicViolation() const;
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};
WilsonInterval Wilson95(std::size_t successes, std::size_t trials);

// Outcome of one separator run against the true source.
enum class TrialOutcome { kSuccess, kAmbiguous, kNoneConsistent, kWrong };
TrialOutcome Classify(const SeparationResult& result, const Vector& truth);

PhaseCurve RunPhaseSweep(const ExperimentConfig& config);

struct DeclipReport {
  double rho = 0.0;
  double theoretical_rate = 0.0;  // rho / 2
  double amplitude = 0.0;
  SupportModel model;
  std::size_t s_observed = 0;  // s1 + s2
  double mean_clipped = 0.0;   // mean clip count over the pilot
  PhaseCurve curve;
  DimFit cloud_fit;
  double slope_per_dim = 0.0;
};

DeclipReport RunDeclip(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Concentration, dimension and uncertainty runs

struct ConcentrationConfig {
  std::size_t n = 2;
  std::size_t k = 1;
  double r = 1.0;
  Vector u;  // default e_1
  Vector v;  // default 0
  std::vector<double> deltas{0.05, 0.1, 0.2};
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::optional<double> slope_tol;
};

ConcentrationConfig ParseConcentrationConfig(const Json& j);

struct DimensionConfig {
  Json cloud;  // {"type": "file"|"segment"|"cantor"|"union_sparse", ...}
  int j_min = 2;
  int j_max = 7;
  std::optional<double> expect_slope;
  double expect_tol = 0.1;
  std::optional<CoverQuery> cover;
  std::uint64_t seed = 0;
};

DimensionConfig ParseDimensionConfig(const Json& j);
PointCloud BuildCloud(const Json& spec, std::uint64_t seed);

struct DimensionReport {
  std::size_t points = 0;
  std::size_t dim = 0;
  DimFit fit;
  std::optional<CoverResult> cover;
  std::optional<CoverQuery> cover_query;
};

DimensionReport RunDimension(const DimensionConfig& config);

struct UncertaintyConfig {
  std::size_t n = 4;
  Principle principle = Principle::kDonohoStark;
  Matrix a;
  Matrix b;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  bool expect_holds = true;
};

UncertaintyConfig ParseUncertaintyConfig(const Json& j);

// ---------------------------------------------------------------------------
// Reports

// CSV columns, in order, for each report type.
inline constexpr const char* kPhaseCsvHeader =
    "k,rate,successes,trials,success_rate,ci_lo,ci_hi";
inline constexpr const char* kLadderCsvHeader = "j,delta,count,log2count";
inline constexpr const char* kConcentrationCsvHeader = "delta,bound,p_hat,ci";
inline constexpr const char* kVerdictCsvHeader = "support_p,support_q";

std::string ToCsv(const PhaseCurve& curve);
std::string ToCsv(const DimFit& fit);
std::string ToCsv(const ConcentrationReport& report);
std::string ToCsv(const UncertaintyVerdict& verdict);

Json ToJson(const PhaseCurve& curve);
Json ToJson(const DeclipReport& report);
Json ToJson(const DimensionReport& report);
Json ToJson(const ConcentrationReport& report);
Json ToJson(const UncertaintyVerdict& verdict);
Json ToJson(const SeparationResult& result);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

enum class ReportFormat { kCsv, kJson };
ReportFormat ParseFormat(const std::string& name);

// A finished experiment in both renderings plus its assertion outcome.
struct ExperimentReport {
  std::string kind;
  std::string csv;
  Json json;
  std::vector<std::string> check_failures;

  bool ChecksPassed() const { return check_failures.empty(); }
  std::string Render(ReportFormat format) const;
};

// Runs `kind` in {sweep, declip, concentration, dimension, uncertainty}.
ExperimentReport RunExperiment(const std::string& kind, const Json& config,
                               std::optional<std::uint64_t> seed_override = {});

// Writes the rendering to `path` (UTF-8, LF). Throws IoError on failure.
void Emit(const ExperimentReport& report, const std::string& path,
          ReportFormat format);

}  // namespace seplab

#endif  // SEPLAB_HARNESS_HPP_
