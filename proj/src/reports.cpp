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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "seplab/harness.hpp"

namespace seplab {

namespace {

constexpr const char* kSchemaVersion = "1";

Json VectorJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// JSON has no infinities; they become null.
Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json ModelJson(const SupportModel& m) { return {{"s1", m.s1}, {"s2", m.s2}}; }

Json FitJson(const DimFit& fit) {
  Json ladder = Json::array();
  for (const LadderRow& r : fit.ladder)
    ladder.push_back({{"j", r.j}, {"delta", r.delta}, {"count", r.count}});
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"degenerate", fit.degenerate},
          {"ladder", ladder}};
}

Json CurveBody(const PhaseCurve& curve) {
  Json rows = Json::array();
  for (const PhaseRow& r : curve.rows) {
    rows.push_back({{"k", r.k},
                    {"rate", r.rate},
                    {"successes", r.successes},
                    {"ambiguous", r.ambiguous},
                    {"none_consistent", r.none_consistent},
                    {"wrong", r.wrong},
                    {"trials", r.trials},
                    {"success_rate", r.success_rate},
                    {"ci_lo", r.ci_lo},
                    {"ci_hi", r.ci_hi}});
  }
  Json predicted = nullptr;
  if (curve.predicted) {
    const RateEstimate& p = *curve.predicted;
    predicted = {{"epsilon", p.epsilon},
                 {"n", p.n},
                 {"s_star", p.s_star},
                 {"rate", p.rate},
                 {"asymptote", p.asymptote}};
  }
  return {{"n", curve.n},
          {"split", curve.split},
          {"model", ModelJson(curve.model)},
          {"kappa", curve.kappa},
          {"predicted", predicted},
          {"isotonic_violation", curve.IsotonicViolation()},
          {"rows", rows},
          {"check_failures", curve.check_failures}};
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string ToCsv(const PhaseCurve& curve) {
  std::ostringstream out;
  out << kPhaseCsvHeader << '\n';
  for (const PhaseRow& r : curve.rows) {
    out << r.k << ',' << FormatDouble(r.rate) << ',' << r.successes << ','
        << r.trials << ',' << FormatDouble(r.success_rate) << ','
        << FormatDouble(r.ci_lo) << ',' << FormatDouble(r.ci_hi) << '\n';
  }
  return out.str();
}

std::string ToCsv(const DimFit& fit) {
  std::ostringstream out;
  out << kLadderCsvHeader << '\n';
  for (const LadderRow& r : fit.ladder) {
    out << r.j << ',' << FormatDouble(r.delta) << ',' << r.count << ','
        << FormatDouble(std::log2(static_cast<double>(r.count))) << '\n';
  }
  return out.str();
}

std::string ToCsv(const ConcentrationReport& report) {
  std::ostringstream out;
  out << kConcentrationCsvHeader << '\n';
  for (const ConcentrationRow& r : report.rows) {
    out << FormatDouble(r.delta) << ',' << FormatDouble(r.bound) << ','
        << FormatDouble(r.p_hat) << ',' << FormatDouble(r.ci) << '\n';
  }
  return out.str();
}

std::string ToCsv(const UncertaintyVerdict& verdict) {
  // Supports are space-separated inside a field.
  auto join = [](const std::vector<std::size_t>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(s[i]);
    }
    return out;
  };
  std::ostringstream out;
  out << kVerdictCsvHeader << '\n';
  for (const UncertaintyViolation& v : verdict.violations)
    out << join(v.support_p) << ',' << join(v.support_q) << '\n';
  return out.str();
}

Json ToJson(const PhaseCurve& curve) {
  Json out = {{"schema_version", kSchemaVersion}, {"report", "phase_curve"}};
  out.update(CurveBody(curve));
  return out;
}

Json ToJson(const DeclipReport& report) {
  return {{"schema_version", kSchemaVersion},
          {"report", "declip"},
          {"rho", report.rho},
          {"theoretical_rate", report.theoretical_rate},
          {"amplitude", report.amplitude},
          {"model", ModelJson(report.model)},
          {"s_observed", report.s_observed},
          {"mean_clipped", report.mean_clipped},
          {"curve", CurveBody(report.curve)},
          {"cloud_fit", FitJson(report.cloud_fit)},
          {"slope_per_dim", report.slope_per_dim}};
}

Json ToJson(const DimensionReport& report) {
  Json out = {{"schema_version", kSchemaVersion},
              {"report", "dimension"},
              {"points", report.points},
              {"dim", report.dim},
              {"fit", FitJson(report.fit)},
              {"cover", nullptr}};
  if (report.cover) {
    Json centers = Json::array();
    for (const Vector& c : report.cover->centers) centers.push_back(VectorJson(c));
    out["cover"] = {
        {"delta", report.cover_query->delta},
        {"center_mode",
         report.cover_query->center_mode == CenterMode::kFree ? "free"
                                                              : "in_set"},
        {"solver",
         report.cover_query->solver == CoverSolver::kExact ? "exact" : "greedy"},
        {"count", report.cover->count},
        {"upper_bound_only", report.cover->upper_bound_only},
        {"bound_factor", report.cover->bound_factor},
        {"centers", centers}};
  }
  return out;
}

Json ToJson(const ConcentrationReport& report) {
  Json rows = Json::array();
  for (const ConcentrationRow& r : report.rows) {
    rows.push_back({{"delta", r.delta},
                    {"bound", Number(r.bound)},
                    {"p_hat", r.p_hat},
                    {"ci", r.ci}});
  }
  const auto slope = report.LogLogSlope();
  return {{"schema_version", kSchemaVersion},
          {"report", "concentration"},
          {"n", report.n},
          {"k", report.k},
          {"r", report.r},
          {"u_norm", report.u_norm},
          {"trials", report.trials},
          {"bound_holds", report.BoundHolds()},
          {"loglog_slope", slope ? Json(*slope) : Json(nullptr)},
          {"rows", rows}};
}

Json ToJson(const UncertaintyVerdict& verdict) {
  Json violations = Json::array();
  for (const UncertaintyViolation& v : verdict.violations) {
    violations.push_back({{"support_p", v.support_p},
                          {"support_q", v.support_q},
                          {"witness", VectorJson(v.witness)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"report", "uncertainty"},
          {"principle", std::string(ToString(verdict.principle))},
          {"mu", verdict.mu ? Json(*verdict.mu) : Json(nullptr)},
          {"checked_pairs", verdict.checked_pairs},
          {"sampled", verdict.sampled},
          {"holds", verdict.Holds()},
          {"violations", violations}};
}

Json ToJson(const SeparationResult& result) {
  Json out = {{"schema_version", kSchemaVersion}};
  if (const auto* u = std::get_if<Unique>(&result)) {
    out["variant"] = "unique";
    out["candidate"] = VectorJson(u->x);
    out["residual"] = u->residual;
    out["support"] = u->support;
  } else if (const auto* a = std::get_if<Ambiguous>(&result)) {
    out["variant"] = "ambiguous";
    out["count"] = a->count;
    out["continuum"] = a->continuum;
    out["candidate"] = VectorJson(a->witness_a);
    out["witness_b"] = VectorJson(a->witness_b);
    out["support"] = a->support_a;
    out["support_b"] = a->support_b;
  } else {
    out["variant"] = "none_consistent";
    out["candidate"] = nullptr;
    out["support"] = Json::array();
  }
  return out;
}

ReportFormat ParseFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown format '" + name + "' (csv or json)");
}

std::string ExperimentReport::Render(ReportFormat format) const {
  if (format == ReportFormat::kCsv) return csv;
  return json.dump(2) + "\n";
}

void Emit(const ExperimentReport& report, const std::string& path,
          ReportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::string text = report.Render(format);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace seplab
