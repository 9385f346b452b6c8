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

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "seplab/seplab.h"

namespace {

const char* kSweep = R"({
  "n": 8, "lambda": 0.25,
  "source": {"mode": "exact_sparsity"},
  "support_model": {"s1": 1, "s2": 1},
  "k_values": [2, 3], "trials": 20, "seed": 5,
  "output": "ignored.csv", "format": "csv"
})";

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(seplab_version()) == "1.0.0");
  CHECK(std::string(seplab_status_name(SEPLAB_ERR_CAPACITY)) == "capacity_error");
}

TEST_CASE("run a sweep through the C api") {
  seplab_config* cfg = nullptr;
  REQUIRE(seplab_config_parse(kSweep, &cfg) == SEPLAB_OK);
  CHECK(std::string(seplab_config_output(cfg)) == "ignored.csv");
  CHECK(std::string(seplab_config_format(cfg)) == "csv");
  seplab_report* rep = nullptr;
  REQUIRE(seplab_run(cfg, "sweep", &rep) == SEPLAB_OK);
  CHECK(seplab_report_checks_passed(rep) == 1);
  CHECK(seplab_report_failure_count(rep) == 0);
  CHECK(seplab_report_failure(rep, 0) == nullptr);
  char* csv = nullptr;
  REQUIRE(seplab_report_render(rep, "csv", &csv) == SEPLAB_OK);
  const std::string text(csv);
  seplab_string_free(csv);
  CHECK(text.rfind("k,rate,successes,trials,success_rate,ci_lo,ci_hi\n", 0) == 0);

  // Same seed, same bytes; different seed via override, different run.
  seplab_report* again = nullptr;
  REQUIRE(seplab_run(cfg, "sweep", &again) == SEPLAB_OK);
  char* csv2 = nullptr;
  REQUIRE(seplab_report_render(again, "csv", &csv2) == SEPLAB_OK);
  CHECK(text == csv2);
  seplab_string_free(csv2);
  seplab_report_free(again);

  CHECK(seplab_report_render(rep, "yaml", &csv) == SEPLAB_ERR_CONFIG);
  CHECK(seplab_report_write(rep, "/nonexistent-dir/x.csv", "csv") == SEPLAB_ERR_IO);
  CHECK(std::strlen(seplab_last_error()) > 0);
  seplab_report_free(rep);
  seplab_config_free(cfg);
}

TEST_CASE("config errors map to status codes") {
  seplab_config* cfg = nullptr;
  CHECK(seplab_config_parse("{not json", &cfg) == SEPLAB_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(seplab_config_parse("[1, 2]", &cfg) == SEPLAB_ERR_CONFIG);
  CHECK(seplab_config_load("/nonexistent/config.json", &cfg) == SEPLAB_ERR_IO);
  CHECK(seplab_config_parse(nullptr, &cfg) == SEPLAB_ERR_INVALID_ARGUMENT);

  REQUIRE(seplab_config_parse(R"({"n": 4, "source": {}, "k_values": [1]})",
                              &cfg) == SEPLAB_OK);
  seplab_report* rep = nullptr;
  CHECK(seplab_run(cfg, "sweep", &rep) == SEPLAB_ERR_CONFIG);  // no s1/s2
  CHECK(rep == nullptr);
  CHECK(seplab_run(cfg, "bogus", &rep) == SEPLAB_ERR_CONFIG);
  seplab_config_free(cfg);
}

TEST_CASE("separate through the C api") {
  // A = 3x2, B = identity_embed 3x2; column-major.
  const double a[] = {0.3, -0.1, 0.5, 0.2, 0.4, -0.6};
  const double b[] = {1, 0, 0, 0, 1, 0};
  seplab_pair* pair = nullptr;
  REQUIRE(seplab_pair_create(a, 3, 2, b, 2, &pair) == SEPLAB_OK);
  CHECK(seplab_pair_rows(pair) == 3);
  CHECK(seplab_pair_cols(pair) == 4);
  // x = (0, 0.7, -0.4, 0)
  const double w[] = {0.7 * 0.2 - 0.4, 0.7 * 0.4, 0.7 * -0.6};
  seplab_separation res;
  double x[4];
  REQUIRE(seplab_separate(pair, w, 1, 1, &res, x) == SEPLAB_OK);
  CHECK(res.variant == SEPLAB_UNIQUE);
  CHECK(std::abs(x[0]) < 1e-9);
  CHECK(std::abs(x[1] - 0.7) < 1e-9);
  CHECK(std::abs(x[2] + 0.4) < 1e-9);
  CHECK(std::abs(x[3]) < 1e-9);
  CHECK(seplab_separate(pair, w, 3, 1, &res, x) == SEPLAB_ERR_CONFIG);
  seplab_pair_free(pair);

  CHECK(seplab_pair_create(a, 3, 2, b, 4, &pair) == SEPLAB_ERR_DIMENSION);
}

TEST_CASE("numeric helpers through the C api") {
  size_t s_star = 0;
  double rate = 0.0;
  REQUIRE(seplab_finite_rate(0.5, 0.5, 0.0, 10, 0.1, &s_star, &rate) == SEPLAB_OK);
  CHECK(s_star == 7);
  CHECK(rate == 0.7);

  double bound = 0.0;
  REQUIRE(seplab_concentration_bound(2, 1, 1.0, 0.1, 1.0, &bound) == SEPLAB_OK);
  CHECK(std::abs(bound - 0.4 / 3.14159265358979323846) < 1e-15);
  CHECK(seplab_concentration_bound(2, 1, 1.0, 0.1, 0.0, &bound) ==
        SEPLAB_ERR_PRECONDITION);

  std::vector<double> pts;
  for (int i = 0; i <= 512; ++i) {
    pts.push_back(i / 512.0);
    pts.push_back(0.0);
  }
  double slope = 0.0, r2 = 0.0;
  REQUIRE(seplab_box_dim(pts.data(), 2, 513, 2, 7, &slope, &r2) == SEPLAB_OK);
  CHECK(std::abs(slope - 1.0) <= 0.1);
  CHECK(seplab_box_dim(pts.data(), 2, 513, 5, 5, &slope, &r2) == SEPLAB_ERR_CONFIG);
}
