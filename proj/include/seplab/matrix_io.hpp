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

// Matrix persistence.
//
// Binary layout (all integers and floats little-endian):
//
//   offset  size  field
//   0       8     magic "SEPLABMX"
//   8       4     uint32 format version, currently 1
//   12      4     uint32 reserved, 0
//   16      8     uint64 rows
//   24      8     uint64 cols
//   32      8*r*c IEEE-754 binary64 entries in column-major order
//
// CSV layout: one matrix row per line, comma-separated, no header, values
// printed with 17 significant digits.

#ifndef SEPLAB_MATRIX_IO_HPP_
#define SEPLAB_MATRIX_IO_HPP_

#include <string>

#include "seplab/common.hpp"

namespace seplab {

void WriteMatrixBinary(const Matrix& m, const std::string& path);
Matrix ReadMatrixBinary(const std::string& path);

void WriteMatrixCsv(const Matrix& m, const std::string& path);
Matrix ReadMatrixCsv(const std::string& path);

}  // namespace seplab

#endif  // SEPLAB_MATRIX_IO_HPP_
