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

/* C interface to the seplab library. All handles are opaque and owned by the
 * caller; free each with its matching *_free function. Functions that can
 * fail return a seplab_status and leave a message in seplab_last_error(),
 * which is per thread and valid until the next failing call on that thread.
 * Matrices are dense, column-major float64. */

#ifndef SEPLAB_SEPLAB_H_
#define SEPLAB_SEPLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEPLAB_BUILDING)
#    define SEPLAB_API __declspec(dllexport)
#  else
#    define SEPLAB_API __declspec(dllimport)
#  endif
#else
#  define SEPLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum seplab_status {
  SEPLAB_OK = 0,
  SEPLAB_ERR_CONFIG = 1,
  SEPLAB_ERR_DIMENSION = 2,
  SEPLAB_ERR_CAPACITY = 3,
  SEPLAB_ERR_PRECONDITION = 4,
  SEPLAB_ERR_UNSUPPORTED_MODEL = 5,
  SEPLAB_ERR_UNDEFINED_ESTIMATE = 6,
  SEPLAB_ERR_IO = 7,
  SEPLAB_ERR_INVALID_ARGUMENT = 8, /* null pointer or bad enum */
  SEPLAB_ERR_INTERNAL = 9
} seplab_status;

typedef struct seplab_config seplab_config;
typedef struct seplab_report seplab_report;
typedef struct seplab_pair seplab_pair;

SEPLAB_API const char* seplab_version(void);
SEPLAB_API const char* seplab_last_error(void);
SEPLAB_API const char* seplab_status_name(seplab_status status);

/* Strings returned through char** are heap copies. */
SEPLAB_API void seplab_string_free(char* s);

/* Experiment configuration (JSON text or file). */
SEPLAB_API seplab_status seplab_config_parse(const char* json,
                                             seplab_config** out);
SEPLAB_API seplab_status seplab_config_load(const char* path,
                                            seplab_config** out);
/* Overrides the "seed" field at run time. */
SEPLAB_API seplab_status seplab_config_set_seed(seplab_config* config,
                                                uint64_t seed);
/* The "output" and "format" fields, or NULL when absent. Owned by config. */
SEPLAB_API const char* seplab_config_output(const seplab_config* config);
SEPLAB_API const char* seplab_config_format(const seplab_config* config);
SEPLAB_API void seplab_config_free(seplab_config* config);

/* kind: "sweep", "declip", "concentration", "dimension" or "uncertainty". */
SEPLAB_API seplab_status seplab_run(const seplab_config* config,
                                    const char* kind, seplab_report** out);

/* 1 when every configured assertion held. */
SEPLAB_API int seplab_report_checks_passed(const seplab_report* report);
SEPLAB_API size_t seplab_report_failure_count(const seplab_report* report);
/* NULL when index is out of range. Owned by report. */
SEPLAB_API const char* seplab_report_failure(const seplab_report* report,
                                             size_t index);
/* format: "csv" or "json". */
SEPLAB_API seplab_status seplab_report_render(const seplab_report* report,
                                              const char* format, char** out);
SEPLAB_API seplab_status seplab_report_write(const seplab_report* report,
                                             const char* path,
                                             const char* format);
SEPLAB_API void seplab_report_free(seplab_report* report);

/* H = [A B] with A k x (n - l) and B k x l. B may have l = 0 (pass NULL). */
SEPLAB_API seplab_status seplab_pair_create(const double* a, size_t k,
                                            size_t a_cols, const double* b,
                                            size_t b_cols, seplab_pair** out);
SEPLAB_API size_t seplab_pair_rows(const seplab_pair* pair);
SEPLAB_API size_t seplab_pair_cols(const seplab_pair* pair);
SEPLAB_API void seplab_pair_free(seplab_pair* pair);

typedef enum seplab_variant {
  SEPLAB_UNIQUE = 0,
  SEPLAB_AMBIGUOUS = 1,
  SEPLAB_NONE_CONSISTENT = 2
} seplab_variant;

typedef struct seplab_separation {
  seplab_variant variant;
  size_t count;     /* distinct candidates seen (ambiguous only) */
  int continuum;    /* ambiguous through a rank-deficient support */
  double residual;  /* unique only */
} seplab_separation;

/* w has k entries. When x_out is non-NULL it receives n entries: the unique
 * candidate, or one of the ambiguous witnesses. */
SEPLAB_API seplab_status seplab_separate(const seplab_pair* pair,
                                         const double* w, size_t s1, size_t s2,
                                         seplab_separation* result,
                                         double* x_out);

/* Mixture with a point mass at 0 (probability 1 - rho) and a continuous part
 * in each block. */
SEPLAB_API seplab_status seplab_finite_rate(double rho_y, double rho_z,
                                            double lambda, size_t n,
                                            double epsilon, size_t* s_star,
                                            double* rate);

SEPLAB_API seplab_status seplab_concentration_bound(size_t n, size_t k,
                                                    double r, double delta,
                                                    double u_norm,
                                                    double* out);

/* points: dim x count, column-major. */
SEPLAB_API seplab_status seplab_box_dim(const double* points, size_t dim,
                                        size_t count, int j_min, int j_max,
                                        double* slope, double* r_squared);

#ifdef __cplusplus
}
#endif

#endif /* SEPLAB_SEPLAB_H_ */
