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

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "seplab/harness.hpp"
#include "seplab/seplab.h"

struct seplab_config {
  seplab::Json json;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format;
};

struct seplab_report {
  seplab::ExperimentReport report;
};

struct seplab_pair {
  seplab::MeasurementPair pair;
};

namespace {

thread_local std::string g_last_error;

seplab_status Fail(seplab_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

seplab_status FromCode(seplab::ErrorCode code) {
  switch (code) {
    case seplab::ErrorCode::kConfig:
      return SEPLAB_ERR_CONFIG;
    case seplab::ErrorCode::kDimension:
      return SEPLAB_ERR_DIMENSION;
    case seplab::ErrorCode::kCapacity:
      return SEPLAB_ERR_CAPACITY;
    case seplab::ErrorCode::kPrecondition:
      return SEPLAB_ERR_PRECONDITION;
    case seplab::ErrorCode::kUnsupportedModel:
      return SEPLAB_ERR_UNSUPPORTED_MODEL;
    case seplab::ErrorCode::kUndefinedEstimate:
      return SEPLAB_ERR_UNDEFINED_ESTIMATE;
    case seplab::ErrorCode::kIo:
      return SEPLAB_ERR_IO;
  }
  return SEPLAB_ERR_INTERNAL;
}

// Runs body and converts any exception into a status code.
template <class Body>
seplab_status Guard(Body body) {
  try {
    body();
    return SEPLAB_OK;
  } catch (const seplab::Error& e) {
    return Fail(FromCode(e.code()), e.what());
  } catch (const seplab::Json::exception& e) {
    return Fail(SEPLAB_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SEPLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SEPLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SEPLAB_ERR_INTERNAL, "unknown error");
  }
}

#define SEPLAB_REQUIRE(cond)                                              \
  do {                                                                    \
    if (!(cond)) return Fail(SEPLAB_ERR_INVALID_ARGUMENT, #cond " failed"); \
  } while (0)

char* CopyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

seplab_status MakeConfig(seplab::Json json, seplab_config** out) {
  if (!json.is_object()) return Fail(SEPLAB_ERR_CONFIG, "config must be a JSON object");
  auto* config = new seplab_config{std::move(json), std::nullopt, {}, {}};
  if (auto it = config->json.find("output");
      it != config->json.end() && it->is_string())
    config->output = it->get<std::string>();
  if (auto it = config->json.find("format");
      it != config->json.end() && it->is_string())
    config->format = it->get<std::string>();
  *out = config;
  return SEPLAB_OK;
}

}  // namespace

extern "C" {

const char* seplab_version(void) { return "1.0.0"; }

const char* seplab_last_error(void) { return g_last_error.c_str(); }

const char* seplab_status_name(seplab_status status) {
  switch (status) {
    case SEPLAB_OK:
      return "ok";
    case SEPLAB_ERR_CONFIG:
      return "config_error";
    case SEPLAB_ERR_DIMENSION:
      return "dimension_error";
    case SEPLAB_ERR_CAPACITY:
      return "capacity_error";
    case SEPLAB_ERR_PRECONDITION:
      return "precondition_error";
    case SEPLAB_ERR_UNSUPPORTED_MODEL:
      return "unsupported_model";
    case SEPLAB_ERR_UNDEFINED_ESTIMATE:
      return "undefined_estimate";
    case SEPLAB_ERR_IO:
      return "io_error";
    case SEPLAB_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case SEPLAB_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

void seplab_string_free(char* s) { delete[] s; }

seplab_status seplab_config_parse(const char* json, seplab_config** out) {
  SEPLAB_REQUIRE(json != nullptr && out != nullptr);
  *out = nullptr;
  seplab::Json parsed;
  seplab_status st = Guard([&] { parsed = seplab::Json::parse(json); });
  if (st != SEPLAB_OK) return st;
  return MakeConfig(std::move(parsed), out);
}

seplab_status seplab_config_load(const char* path, seplab_config** out) {
  SEPLAB_REQUIRE(path != nullptr && out != nullptr);
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return Fail(SEPLAB_ERR_IO, std::string("cannot open '") + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return seplab_config_parse(text.str().c_str(), out);
}

seplab_status seplab_config_set_seed(seplab_config* config, uint64_t seed) {
  SEPLAB_REQUIRE(config != nullptr);
  config->seed = seed;
  return SEPLAB_OK;
}

const char* seplab_config_output(const seplab_config* config) {
  if (config == nullptr || config->output.empty()) return nullptr;
  return config->output.c_str();
}

const char* seplab_config_format(const seplab_config* config) {
  if (config == nullptr || config->format.empty()) return nullptr;
  return config->format.c_str();
}

void seplab_config_free(seplab_config* config) { delete config; }

seplab_status seplab_run(const seplab_config* config, const char* kind,
                         seplab_report** out) {
  SEPLAB_REQUIRE(config != nullptr && kind != nullptr && out != nullptr);
  *out = nullptr;
  return Guard([&] {
    auto report = std::make_unique<seplab_report>();
    report->report = seplab::RunExperiment(kind, config->json, config->seed);
    *out = report.release();
  });
}

int seplab_report_checks_passed(const seplab_report* report) {
  return report != nullptr && report->report.ChecksPassed() ? 1 : 0;
}

size_t seplab_report_failure_count(const seplab_report* report) {
  return report ? report->report.check_failures.size() : 0;
}

const char* seplab_report_failure(const seplab_report* report, size_t index) {
  if (report == nullptr || index >= report->report.check_failures.size())
    return nullptr;
  return report->report.check_failures[index].c_str();
}

seplab_status seplab_report_render(const seplab_report* report,
                                   const char* format, char** out) {
  SEPLAB_REQUIRE(report != nullptr && format != nullptr && out != nullptr);
  *out = nullptr;
  return Guard([&] {
    *out = CopyString(report->report.Render(seplab::ParseFormat(format)));
  });
}

seplab_status seplab_report_write(const seplab_report* report, const char* path,
                                  const char* format) {
  SEPLAB_REQUIRE(report != nullptr && path != nullptr && format != nullptr);
  return Guard([&] {
    seplab::Emit(report->report, path, seplab::ParseFormat(format));
  });
}

void seplab_report_free(seplab_report* report) { delete report; }

seplab_status seplab_pair_create(const double* a, size_t k, size_t a_cols,
                                 const double* b, size_t b_cols,
                                 seplab_pair** out) {
  SEPLAB_REQUIRE(out != nullptr);
  SEPLAB_REQUIRE(a != nullptr || k * a_cols == 0);
  SEPLAB_REQUIRE(b != nullptr || k * b_cols == 0);
  *out = nullptr;
  return Guard([&] {
    using seplab::Matrix;
    const auto rows = static_cast<Eigen::Index>(k);
    Matrix am = a_cols ? Matrix(Eigen::Map<const Matrix>(
                             a, rows, static_cast<Eigen::Index>(a_cols)))
                       : Matrix(rows, 0);
    Matrix bm = b_cols ? Matrix(Eigen::Map<const Matrix>(
                             b, rows, static_cast<Eigen::Index>(b_cols)))
                       : Matrix(rows, 0);
    *out = new seplab_pair{seplab::MeasurementPair(std::move(am), std::move(bm))};
  });
}

size_t seplab_pair_rows(const seplab_pair* pair) {
  return pair ? pair->pair.k() : 0;
}

size_t seplab_pair_cols(const seplab_pair* pair) {
  return pair ? pair->pair.n() : 0;
}

void seplab_pair_free(seplab_pair* pair) { delete pair; }

seplab_status seplab_separate(const seplab_pair* pair, const double* w,
                              size_t s1, size_t s2, seplab_separation* result,
                              double* x_out) {
  SEPLAB_REQUIRE(pair != nullptr && result != nullptr);
  SEPLAB_REQUIRE(w != nullptr || pair->pair.k() == 0);
  return Guard([&] {
    const auto k = static_cast<Eigen::Index>(pair->pair.k());
    const seplab::Vector wv =
        k ? seplab::Vector(Eigen::Map<const seplab::Vector>(w, k))
          : seplab::Vector(0);
    const seplab::SeparationResult r =
        seplab::Separate(pair->pair, wv, seplab::SupportModel{s1, s2});
    *result = seplab_separation{SEPLAB_NONE_CONSISTENT, 0, 0, 0.0};
    const seplab::Vector* x = nullptr;
    if (const auto* u = std::get_if<seplab::Unique>(&r)) {
      result->variant = SEPLAB_UNIQUE;
      result->count = 1;
      result->residual = u->residual;
      x = &u->x;
    } else if (const auto* amb = std::get_if<seplab::Ambiguous>(&r)) {
      result->variant = SEPLAB_AMBIGUOUS;
      result->count = amb->count;
      result->continuum = amb->continuum ? 1 : 0;
      x = &amb->witness_a;
    }
    if (x_out != nullptr && x != nullptr)
      std::memcpy(x_out, x->data(), sizeof(double) * x->size());
  });
}

seplab_status seplab_finite_rate(double rho_y, double rho_z, double lambda,
                                 size_t n, double epsilon, size_t* s_star,
                                 double* rate) {
  SEPLAB_REQUIRE(s_star != nullptr && rate != nullptr);
  return Guard([&] {
    seplab::ConcatSpec spec;
    spec.spec_y.rho = rho_y;
    spec.spec_z.rho = rho_z;
    spec.lambda = lambda;
    const seplab::RateEstimate est = seplab::FiniteRate(spec, n, epsilon);
    *s_star = est.s_star;
    *rate = est.rate;
  });
}

seplab_status seplab_concentration_bound(size_t n, size_t k, double r,
                                         double delta, double u_norm,
                                         double* out) {
  SEPLAB_REQUIRE(out != nullptr);
  return Guard(
      [&] { *out = seplab::ConcentrationBound(n, k, r, delta, u_norm); });
}

seplab_status seplab_box_dim(const double* points, size_t dim, size_t count,
                             int j_min, int j_max, double* slope,
                             double* r_squared) {
  SEPLAB_REQUIRE(points != nullptr && slope != nullptr);
  return Guard([&] {
    seplab::Matrix pts = Eigen::Map<const seplab::Matrix>(
        points, static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
    const seplab::DimFit fit =
        seplab::BoxDim(seplab::PointCloud(std::move(pts)), j_min, j_max);
    *slope = fit.slope;
    if (r_squared) *r_squared = fit.r_squared;
  });
}

}  // extern "C"
