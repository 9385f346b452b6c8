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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "seplab/harness.hpp"
#include "seplab/rng.hpp"

namespace seplab {

namespace {

// Stream tags for draws that do not belong to a (k, trial) cell. Sweep k
// values never get near these.
constexpr std::uint64_t kPilotStream = std::uint64_t{1} << 62;
constexpr std::uint64_t kCloudStream = kPilotStream + 1;

constexpr double kRecoveryTol = 1e-6;

// Runs body(i) for i in [0, count). Results must be written to slot i so the
// output does not depend on scheduling.
template <class Body>
void ParallelFor(std::size_t count, std::size_t threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SeparatorOptions OptionsFor(const ExperimentConfig& c) {
  SeparatorOptions o;
  o.tol = c.tolerances.fit;
  o.distinct = c.tolerances.distinct;
  o.rank_rel = c.tolerances.rank;
  o.budget = c.budget;
  return o;
}

SupportModel ResolveModel(const ExperimentConfig& c) {
  if (c.support) return *c.support;
  const std::size_t split = c.Split();
  const double eps = *c.epsilon;
  // Each block gets half the error budget, so P[x inside model] >= 1 - eps.
  return SupportModel{
      PmfQuantile(BinomialPmf(c.n - split, c.concat.spec_y.rho), eps / 2),
      PmfQuantile(BinomialPmf(split, c.concat.spec_z.rho), eps / 2)};
}

Matrix BlockB(const ExperimentConfig& c, std::size_t k, std::size_t split) {
  if (split == 0) return Matrix(static_cast<Eigen::Index>(k), 0);
  return BuildB(c.b_kind, k, split, c.custom_b);
}

PhaseRow Tally(std::size_t k, std::size_t n,
               const std::vector<TrialOutcome>& outcomes) {
  PhaseRow row;
  row.k = k;
  row.rate = static_cast<double>(k) / static_cast<double>(n);
  row.trials = outcomes.size();
  for (TrialOutcome o : outcomes) {
    switch (o) {
      case TrialOutcome::kSuccess:
        ++row.successes;
        break;
      case TrialOutcome::kAmbiguous:
        ++row.ambiguous;
        break;
      case TrialOutcome::kNoneConsistent:
        ++row.none_consistent;
        break;
      case TrialOutcome::kWrong:
        ++row.wrong;
        break;
    }
  }
  row.success_rate =
      static_cast<double>(row.successes) / static_cast<double>(row.trials);
  const WilsonInterval ci = Wilson95(row.successes, row.trials);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  return row;
}

void EvaluateChecks(const ExperimentConfig& c, PhaseCurve& curve) {
  for (const CurveCheck& chk : c.checks) {
    auto it = std::find_if(curve.rows.begin(), curve.rows.end(),
                           [&](const PhaseRow& r) { return r.k == chk.k; });
    std::ostringstream msg;
    msg << "k=" << chk.k << ": ";
    if (it == curve.rows.end()) {
      msg << "no row for this k";
      curve.check_failures.push_back(msg.str());
      continue;
    }
    const double amb =
        static_cast<double>(it->ambiguous) / static_cast<double>(it->trials);
    if (chk.min_success_rate && it->success_rate < *chk.min_success_rate) {
      msg << "success rate " << it->success_rate << " < "
          << *chk.min_success_rate;
      curve.check_failures.push_back(msg.str());
    } else if (chk.max_success_rate &&
               it->success_rate > *chk.max_success_rate) {
      msg << "success rate " << it->success_rate << " > "
          << *chk.max_success_rate;
      curve.check_failures.push_back(msg.str());
    } else if (chk.min_ambiguous_rate && amb < *chk.min_ambiguous_rate) {
      msg << "ambiguous rate " << amb << " < " << *chk.min_ambiguous_rate;
      curve.check_failures.push_back(msg.str());
    }
  }
  if (c.max_isotonic_violation) {
    const double v = curve.IsotonicViolation();
    if (v > *c.max_isotonic_violation) {
      std::ostringstream msg;
      msg << "isotonic violation " << v << " > " << *c.max_isotonic_violation;
      curve.check_failures.push_back(msg.str());
    }
  }
}

template <class TrialFn>
std::vector<TrialOutcome> RunTrials(const ExperimentConfig& c, std::size_t k,
                                    TrialFn trial) {
  std::vector<TrialOutcome> outcomes(c.trials);
  try {
    ParallelFor(c.trials, c.threads,
                [&](std::size_t t) { outcomes[t] = trial(t); });
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "k=" << k << ": " << e.what();
    throw Error(e.code(), msg.str());
  }
  return outcomes;
}

}  // namespace

WilsonInterval Wilson95(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double denom = 1.0 + z * z / nt;
  const double center = (p + z * z / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
  // Pin the ends exactly; the formula leaves rounding dust there.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

TrialOutcome Classify(const SeparationResult& result, const Vector& truth) {
  if (const auto* u = std::get_if<Unique>(&result)) {
    const double err = (u->x - truth).norm();
    return err <= kRecoveryTol * std::max(1.0, truth.norm())
               ? TrialOutcome::kSuccess
               : TrialOutcome::kWrong;
  }
  if (std::holds_alternative<Ambiguous>(result)) return TrialOutcome::kAmbiguous;
  return TrialOutcome::kNoneConsistent;
}

double PhaseCurve::IsotonicViolation() const {
  if (rows.empty()) return 0.0;
  std::vector<const PhaseRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const PhaseRow* a, const PhaseRow* b) { return a->k < b->k; });
  // Pool-adjacent-violators for a nondecreasing fit.
  struct Block {
    double value;
    double weight;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (const PhaseRow* r : sorted) {
    blocks.push_back({r->success_rate, static_cast<double>(r->trials), 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].value > blocks.back().value) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.len += b.len;
    }
  }
  double gap = 0.0, total = 0.0;
  std::size_t i = 0;
  for (const Block& b : blocks) {
    for (std::size_t j = 0; j < b.len; ++j, ++i) {
      const double w = static_cast<double>(sorted[i]->trials);
      gap += w * std::abs(sorted[i]->success_rate - b.value);
      total += w;
    }
  }
  return total > 0.0 ? gap / total : 0.0;
}

PhaseCurve RunPhaseSweep(const ExperimentConfig& c) {
  c.Validate();
  if (c.mode == SourceMode::kDeclip)
    throw ConfigError("declip sources run through the declip experiment");
  PhaseCurve curve;
  curve.n = c.n;
  curve.split = c.Split();
  curve.model = ResolveModel(c);
  curve.kappa = c.kappa;
  if (c.mode == SourceMode::kMixture && c.concat.spec_y.IsSparse() &&
      c.concat.spec_z.IsSparse()) {
    ConcatSpec spec = c.concat;
    spec.lambda = c.lambda;
    curve.predicted = FiniteRate(spec, c.n, c.epsilon.value_or(0.1));
  }
  const SeparatorOptions options = OptionsFor(c);
  const std::size_t y_len = c.n - curve.split;

  for (std::size_t k : c.k_values) {
    const Matrix b = BlockB(c, k, curve.split);
    auto outcomes = RunTrials(c, k, [&](std::size_t t) {
      const std::uint64_t trial_seed = DeriveSeed(c.seed, k, t);
      Vector x;
      if (c.mode == SourceMode::kExactSparsity) {
        x = SampleExactSparse(c.n, curve.split, curve.model.s1, curve.model.s2,
                              c.value_law, DeriveSeed(trial_seed, 0))
                .x;
      } else {
        ConcatSpec spec = c.concat;
        spec.lambda = c.lambda;
        x = SampleConcat(spec, c.n, DeriveSeed(trial_seed, 0)).x;
      }
      MeasurementPair pair(SampleA(c.a_law, k, y_len, DeriveSeed(trial_seed, 1)),
                           b);
      const Vector w = pair.h() * x;
      return Classify(Separate(pair, w, curve.model, options), x);
    });
    curve.rows.push_back(Tally(k, c.n, outcomes));
  }
  EvaluateChecks(c, curve);
  return curve;
}

DeclipReport RunDeclip(const ExperimentConfig& c) {
  c.Validate();
  if (c.mode != SourceMode::kDeclip)
    throw ConfigError("declip experiment needs a declip source");
  const DeclipSpec& spec = c.declip;
  const std::size_t split = c.Split();
  const std::size_t cols = c.n - split;
  const double eps = c.epsilon.value_or(0.01);

  DeclipReport report;
  report.rho = spec.coeff_model.rho;
  report.theoretical_rate = 0.5 * report.rho;
  report.amplitude = spec.amplitude;
  report.model.s1 = spec.coeff_sparsity
                        ? *spec.coeff_sparsity
                        : PmfQuantile(BinomialPmf(cols, report.rho), eps / 2);

  // Clip-count quantile from a pilot run.
  std::vector<std::size_t> clip_counts(std::max<std::size_t>(1, c.pilot_samples));
  for (std::size_t i = 0; i < clip_counts.size(); ++i) {
    const SignalSample s = SampleDeclip(spec, DeriveSeed(c.seed, kPilotStream, i));
    clip_counts[i] = CountNonzeros(s.z(), 1e-12);
  }
  double total_clipped = 0.0;
  for (std::size_t v : clip_counts) total_clipped += static_cast<double>(v);
  report.mean_clipped = total_clipped / static_cast<double>(clip_counts.size());
  std::sort(clip_counts.begin(), clip_counts.end());
  const auto q_index = static_cast<std::size_t>(std::ceil(
      (1.0 - eps / 2) * static_cast<double>(clip_counts.size()))) ;
  report.model.s2 = std::min(
      split, clip_counts[std::min(clip_counts.size() - 1,
                                  q_index == 0 ? 0 : q_index - 1)]);
  report.s_observed = report.model.s1 + report.model.s2;

  std::vector<std::size_t> ks = c.k_values;
  if (ks.empty()) ks.push_back(std::max(split, report.s_observed + 1));

  PhaseCurve& curve = report.curve;
  curve.n = c.n;
  curve.split = split;
  curve.model = report.model;
  curve.kappa = c.kappa;
  const SeparatorOptions options = OptionsFor(c);
  for (std::size_t k : ks) {
    if (k < split) throw ConfigError("declip k must be >= floor(n/2)");
    const Matrix b = BlockB(c, k, split);
    auto outcomes = RunTrials(c, k, [&](std::size_t t) {
      const std::uint64_t trial_seed = DeriveSeed(c.seed, k, t);
      const SignalSample s = SampleDeclip(spec, DeriveSeed(trial_seed, 0));
      MeasurementPair pair(SampleA(c.a_law, k, cols, DeriveSeed(trial_seed, 1)),
                           b);
      const Vector w = pair.h() * s.x;
      return Classify(Separate(pair, w, curve.model, options), s.x);
    });
    curve.rows.push_back(Tally(k, c.n, outcomes));
  }
  EvaluateChecks(c, curve);

  if (c.cloud_samples > 0) {
    Matrix pts(static_cast<Eigen::Index>(c.n),
               static_cast<Eigen::Index>(c.cloud_samples));
    for (std::size_t i = 0; i < c.cloud_samples; ++i)
      pts.col(static_cast<Eigen::Index>(i)) =
          SampleDeclip(spec, DeriveSeed(c.seed, kCloudStream, i)).x;
    report.cloud_fit = BoxDim(PointCloud(std::move(pts)), c.j_min, c.j_max);
    report.slope_per_dim = report.cloud_fit.slope / static_cast<double>(c.n);
  }
  return report;
}

DimensionReport RunDimension(const DimensionConfig& c) {
  const PointCloud cloud = BuildCloud(c.cloud, c.seed);
  DimensionReport report;
  report.points = cloud.size();
  report.dim = cloud.dim();
  report.fit = BoxDim(cloud, c.j_min, c.j_max);
  if (c.cover) {
    report.cover_query = c.cover;
    report.cover = CoverCount(cloud, *c.cover);
  }
  return report;
}

ExperimentReport RunExperiment(const std::string& kind, const Json& config,
                               std::optional<std::uint64_t> seed_override) {
  ExperimentReport out;
  out.kind = kind;
  if (kind == "sweep" || kind == "declip") {
    ExperimentConfig c = ParseExperimentConfig(config);
    if (seed_override) c.seed = *seed_override;
    if (kind == "sweep") {
      const PhaseCurve curve = RunPhaseSweep(c);
      out.csv = ToCsv(curve);
      out.json = ToJson(curve);
      out.check_failures = curve.check_failures;
    } else {
      const DeclipReport report = RunDeclip(c);
      out.csv = ToCsv(report.curve);
      out.json = ToJson(report);
      out.check_failures = report.curve.check_failures;
    }
  } else if (kind == "concentration") {
    ConcentrationConfig c = ParseConcentrationConfig(config);
    if (seed_override) c.seed = *seed_override;
    const ConcentrationReport report =
        RunConcentration(c.n, c.k, c.r, c.u, c.v, c.deltas, c.trials, c.seed);
    out.csv = ToCsv(report);
    out.json = ToJson(report);
    if (!report.BoundHolds())
      out.check_failures.push_back("p_hat - 3 ci exceeds the bound");
    if (c.slope_tol) {
      const auto slope = report.LogLogSlope();
      if (!slope ||
          std::abs(*slope - static_cast<double>(c.k)) > *c.slope_tol) {
        std::ostringstream msg;
        msg << "log-log slope "
            << (slope ? std::to_string(*slope) : std::string("undefined"))
            << " not within " << *c.slope_tol << " of k=" << c.k;
        out.check_failures.push_back(msg.str());
      }
    }
  } else if (kind == "dimension") {
    DimensionConfig c = ParseDimensionConfig(config);
    if (seed_override) c.seed = *seed_override;
    const DimensionReport report = RunDimension(c);
    out.csv = ToCsv(report.fit);
    out.json = ToJson(report);
    if (c.expect_slope &&
        std::abs(report.fit.slope - *c.expect_slope) > c.expect_tol) {
      std::ostringstream msg;
      msg << "slope " << report.fit.slope << " not within " << c.expect_tol
          << " of " << *c.expect_slope;
      out.check_failures.push_back(msg.str());
    }
  } else if (kind == "uncertainty") {
    UncertaintyConfig c = ParseUncertaintyConfig(config);
    if (seed_override) c.seed = *seed_override;
    const UncertaintyVerdict verdict =
        ClassicalCheck(c.a, c.b, c.principle, c.budget, c.seed);
    out.csv = ToCsv(verdict);
    out.json = ToJson(verdict);
    if (c.expect_holds && !verdict.Holds()) {
      out.check_failures.push_back(
          std::to_string(verdict.violations.size()) +
          " kernel witnesses inside the forbidden region");
    }
  } else {
    throw ConfigError("unknown experiment '" + kind + "'");
  }
  return out;
}

}  // namespace seplab
