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

#ifndef SEPLAB_COMMON_HPP_
#define SEPLAB_COMMON_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace seplab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error categories surfaced by every module. The C API maps these one-to-one
// onto seplab_status codes.
enum class ErrorCode {
  kConfig = 1,
  kDimension,
  kCapacity,
  kPrecondition,
  kUnsupportedModel,
  kUndefinedEstimate,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::kConfig, w) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& w)
      : Error(ErrorCode::kDimension, w) {}
};
struct CapacityError : Error {
  explicit CapacityError(const std::string& w)
      : Error(ErrorCode::kCapacity, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w)
      : Error(ErrorCode::kPrecondition, w) {}
};
struct UnsupportedModelError : Error {
  explicit UnsupportedModelError(const std::string& w)
      : Error(ErrorCode::kUnsupportedModel, w) {}
};
struct UndefinedEstimateError : Error {
  explicit UndefinedEstimateError(const std::string& w)
      : Error(ErrorCode::kUndefinedEstimate, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::kIo, w) {}
};

// Numerical rank tolerance: 1e-9 * sigma_max * max(rows, cols).
double RankTolerance(double sigma_max, Eigen::Index rows, Eigen::Index cols);

// Numerical rank of `m` using RankTolerance on its singular values.
Eigen::Index NumericalRank(const Matrix& m);

// Smallest singular value (0 for matrices with no columns or no rows).
double SmallestSingularValue(const Matrix& m);

}  // namespace seplab

#endif  // SEPLAB_COMMON_HPP_
