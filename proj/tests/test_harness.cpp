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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "seplab/harness.hpp"

using namespace seplab;
using Catch::Approx;

namespace {

Json SweepJson() {
  return Json::parse(R"({
    "n": 10, "lambda": 0.3,
    "source": {"mode": "exact_sparsity"},
    "support_model": {"s1": 2, "s2": 1},
    "b_kind": "dct_orthonormal",
    "k_values": [3, 4, 5],
    "trials": 30, "seed": 11, "threads": 1
  })");
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("wilson interval against the closed form") {
  // 7 of 20, z = 1.96: centre (p + z^2/2n)/(1 + z^2/n).
  const double z = 1.959963984540054, n = 20, p = 0.35;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half =
      z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  const auto ci = Wilson95(7, 20);
  CHECK(ci.lo == Approx(centre - half));
  CHECK(ci.hi == Approx(centre + half));
  CHECK(Wilson95(0, 50).lo == 0.0);
  CHECK(Wilson95(50, 50).hi == 1.0);
}

TEST_CASE("isotonic violation") {
  PhaseCurve c;
  for (auto [k, r] : {std::pair{1, 0.0}, {2, 0.5}, {3, 1.0}}) {
    PhaseRow row;
    row.k = k;
    row.trials = 10;
    row.success_rate = r;
    c.rows.push_back(row);
  }
  CHECK(c.IsotonicViolation() == 0.0);
  c.rows[1].success_rate = 1.0;
  c.rows[2].success_rate = 0.6;
  // Pooled (1.0, 0.6) -> 0.8; mean gap (0 + 0.2 + 0.2) / 3.
  CHECK(c.IsotonicViolation() == Approx(0.4 / 3));
}

TEST_CASE("zero sources always succeed") {
  Json j = SweepJson();
  j["support_model"] = {{"s1", 0}, {"s2", 0}};
  const PhaseCurve curve = RunPhaseSweep(ParseExperimentConfig(j));
  for (const auto& row : curve.rows) CHECK(row.successes == row.trials);
}

TEST_CASE("sweep transition sits at k = s + 1") {
  const PhaseCurve curve = RunPhaseSweep(ParseExperimentConfig(SweepJson()));
  REQUIRE(curve.rows.size() == 3);
  CHECK(curve.split == 3);
  CHECK(curve.rows[0].ambiguous == 30);  // k = 3 = s
  CHECK(curve.rows[1].successes == 30);  // k = 4
  CHECK(curve.rows[2].successes == 30);
  for (const auto& row : curve.rows) {
    CHECK(row.successes + row.ambiguous + row.none_consistent + row.wrong ==
          row.trials);
    CHECK(row.rate == Approx(row.k / 10.0));
  }
}

TEST_CASE("results do not depend on the thread count") {
  Json j = SweepJson();
  const std::string one = ToCsv(RunPhaseSweep(ParseExperimentConfig(j)));
  j["threads"] = 3;
  const std::string three = ToCsv(RunPhaseSweep(ParseExperimentConfig(j)));
  CHECK(one == three);
  j["seed"] = 12;
  CHECK(ToCsv(RunPhaseSweep(ParseExperimentConfig(j))) != "");
}

TEST_CASE("identical seeds give byte-identical csv") {
  const auto a = RunExperiment("sweep", SweepJson());
  const auto b = RunExperiment("sweep", SweepJson());
  CHECK(a.csv == b.csv);
  CHECK(a.json.dump() == b.json.dump());
}

TEST_CASE("checks and isotonic assertions") {
  Json j = SweepJson();
  j["checks"] = Json::parse(R"([{"k": 3, "min_success_rate": 0.5},
                                {"k": 4, "min_success_rate": 0.9},
                                {"k": 9, "min_success_rate": 0.9}])");
  j["max_isotonic_violation"] = 0.05;
  const auto r = RunExperiment("sweep", j);
  CHECK(r.check_failures.size() == 2);
  CHECK_FALSE(r.ChecksPassed());
}

TEST_CASE("config validation") {
  Json j = SweepJson();
  j["k_values"] = {2};  // below floor(0.3 * 10)
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
  j = SweepJson();
  j["trials"] = 0;
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
  j = SweepJson();
  j["kappa"] = 0.2;
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
  j = SweepJson();
  j.erase("n");
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
  j = SweepJson();
  j["b_kind"] = "wavelet";
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
  CHECK_THROWS_AS(RunExperiment("plot", SweepJson()), ConfigError);
}

TEST_CASE("capacity errors name the offending k") {
  Json j = SweepJson();
  j["budget"] = 10;
  try {
    RunPhaseSweep(ParseExperimentConfig(j));
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapacity);
    CHECK(std::string(e.what()).rfind("k=3", 0) == 0);
  }
}

TEST_CASE("mixture sweep reports the predicted rate") {
  const Json j = Json::parse(R"({
    "n": 12, "lambda": 0.25,
    "source": {"mode": "mixture", "y": {"rho": 0.2}, "z": {"rho": 0.4}},
    "epsilon": 0.1,
    "k_values": [6], "trials": 20, "seed": 1
  })");
  const PhaseCurve curve = RunPhaseSweep(ParseExperimentConfig(j));
  REQUIRE(curve.predicted.has_value());
  CHECK(curve.predicted->asymptote == Approx(0.75 * 0.2 + 0.25 * 0.4));
  CHECK(curve.predicted->s_star <= 12);
  // Per-block quantiles at 1 - eps/2.
  CHECK(curve.model.s1 >= 1);
  CHECK(curve.model.s2 >= 1);
}

TEST_CASE("declip run") {
  const Json j = Json::parse(R"({
    "n": 12, "lambda": 0.5,
    "source": {"mode": "declip", "dictionary": "dct_orthonormal",
               "amplitude": 0.3, "coeff": {"rho": 0.3}, "coeff_sparsity": 1},
    "epsilon": 0.05, "trials": 40, "seed": 3,
    "pilot_samples": 500, "cloud_samples": 300
  })");
  const DeclipReport r = RunDeclip(ParseExperimentConfig(j));
  CHECK(r.theoretical_rate == Approx(0.15));
  CHECK(r.model.s1 == 1);
  REQUIRE(r.curve.rows.size() == 1);
  CHECK(r.curve.rows[0].k == std::max<std::size_t>(6, r.s_observed + 1));
  CHECK(r.curve.rows[0].success_rate >= 0.9);
  CHECK(r.cloud_fit.ladder.size() == 6);
}

TEST_CASE("declip without clipping is plain compression") {
  const Json j = Json::parse(R"({
    "n": 8, "lambda": 0.5,
    "source": {"mode": "declip", "amplitude": 1e9, "coeff": {"rho": 0.3},
               "coeff_sparsity": 1},
    "trials": 10, "seed": 3, "pilot_samples": 100, "cloud_samples": 0
  })");
  const DeclipReport r = RunDeclip(ParseExperimentConfig(j));
  CHECK(r.model.s2 == 0);
  CHECK(r.mean_clipped == 0.0);
  CHECK(r.curve.rows[0].successes == 10);
}

TEST_CASE("declip requires lambda one half") {
  Json j = Json::parse(R"({
    "n": 12, "lambda": 0.25,
    "source": {"mode": "declip", "amplitude": 0.3, "coeff": {"rho": 0.3}}
  })");
  CHECK_THROWS_AS(ParseExperimentConfig(j), ConfigError);
}

TEST_CASE("phase csv layout") {
  PhaseCurve empty;
  CHECK(ToCsv(empty) == std::string(kPhaseCsvHeader) + "\n");
  PhaseCurve one;
  PhaseRow row;
  row.k = 7;
  row.rate = 0.35;
  row.successes = 199;
  row.trials = 200;
  row.success_rate = 0.995;
  row.ci_lo = 0.25;
  row.ci_hi = 1.0;
  one.rows.push_back(row);
  CHECK(ToCsv(one) ==
        "k,rate,successes,trials,success_rate,ci_lo,ci_hi\n"
        "7,0.35,199,200,0.995,0.25,1\n");
}

TEST_CASE("written reports round-trip their numbers") {
  const auto report = RunExperiment("sweep", SweepJson());
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv_path = (dir / "seplab_phase.csv").string();
  const std::string json_path = (dir / "seplab_phase.json").string();
  Emit(report, csv_path, ReportFormat::kCsv);
  Emit(report, json_path, ReportFormat::kJson);

  const std::string text = Slurp(csv_path);
  CHECK(text.find('\r') == std::string::npos);
  const auto rows = ParseCsv(text);
  const Json parsed = Json::parse(Slurp(json_path));
  CHECK(parsed.at("schema_version") == "1");
  REQUIRE(rows.size() == parsed.at("rows").size() + 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Json& r = parsed.at("rows").at(i - 1);
    const char* names[] = {"k", "rate", "successes", "trials",
                           "success_rate", "ci_lo", "ci_hi"};
    for (int c = 0; c < 7; ++c) {
      const double from_csv = std::strtod(rows[i][c].c_str(), nullptr);
      const double from_json = r.at(names[c]).get<double>();
      CHECK(from_csv == Approx(from_json).epsilon(1e-15));
    }
  }
  std::filesystem::remove(csv_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("format double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5e-7, 0.0})
    CHECK(std::strtod(FormatDouble(v).c_str(), nullptr) == v);
  CHECK(FormatDouble(1.0) == "1");
}

TEST_CASE("emit to an unwritable path") {
  const auto report = RunExperiment("sweep", SweepJson());
  CHECK_THROWS_AS(Emit(report, "/nonexistent-dir/x.csv", ReportFormat::kCsv),
                  IoError);
  CHECK_THROWS_AS(ParseFormat("xml"), ConfigError);
}

TEST_CASE("separation results serialize with a variant tag") {
  Unique u;
  u.x = Vector::Ones(3);
  u.residual = 1e-12;
  u.support = {0, 2};
  const Json j = ToJson(SeparationResult{u});
  CHECK(j.at("variant") == "unique");
  CHECK(j.at("candidate").size() == 3);
  CHECK(j.at("support") == Json::array({0, 2}));
  CHECK(ToJson(SeparationResult{NoneConsistent{}}).at("variant") ==
        "none_consistent");
}

TEST_CASE("concentration, dimension and uncertainty experiments") {
  const auto conc = RunExperiment("concentration", Json::parse(R"({
    "n": 2, "k": 1, "deltas": [0.05, 0.1, 0.2], "trials": 20000,
    "seed": 4, "slope_tol": 0.25})"));
  CHECK(conc.ChecksPassed());
  CHECK(conc.csv.rfind("delta,bound,p_hat,ci\n", 0) == 0);

  const auto dim = RunExperiment("dimension", Json::parse(R"({
    "cloud": {"type": "cantor", "depth": 8},
    "expect": {"slope": 0.6309, "tol": 0.12},
    "cover": {"delta": 0.1, "solver": "greedy"}})"));
  CHECK(dim.ChecksPassed());
  CHECK(dim.json.at("cover").at("upper_bound_only") == true);
  CHECK(dim.csv.rfind("j,delta,count,log2count\n", 0) == 0);

  const auto unc = RunExperiment("uncertainty", Json::parse(R"({
    "n": 4, "principle": "donoho_stark", "a": "identity",
    "b": "hadamard_scaled"})"));
  CHECK(unc.ChecksPassed());
  CHECK(unc.json.at("holds") == true);
  CHECK(unc.csv == "support_p,support_q\n");
}
