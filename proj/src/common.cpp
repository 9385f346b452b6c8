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

#include "seplab/common.hpp"

#include <algorithm>

namespace seplab {

double RankTolerance(double sigma_max, Eigen::Index rows, Eigen::Index cols) {
  return 1e-9 * sigma_max * static_cast<double>(std::max(rows, cols));
}

Eigen::Index NumericalRank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double tol = RankTolerance(sv(0), m.rows(), m.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

double SmallestSingularValue(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  // A wide matrix always has a nontrivial kernel.
  if (m.cols() > m.rows()) return 0.0;
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace seplab
