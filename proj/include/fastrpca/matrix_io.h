// Copyright 2026 The fastrpca Authors.
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

#ifndef FASTRPCA_MATRIX_IO_H_
#define FASTRPCA_MATRIX_IO_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "fastrpca/bench.h"
#include "fastrpca/full_solver.h"
#include "fastrpca/matrix.h"
#include "fastrpca/partial_solver.h"

namespace fastrpca {

enum class MatrixFormat { kMatrixMarket, kCsv, kRawBinary };

// "mm" / "matrix-market", "csv", "raw" / "raw-binary". Throws ConfigError.
MatrixFormat ParseMatrixFormat(std::string_view name);
// From the extension: .mtx, .csv, .bin / .rpca. Throws ConfigError.
MatrixFormat FormatFromPath(const std::filesystem::path& path);

// Matrix Market coordinate files yield an ObservedInstance whose pattern is
// Phi; array, CSV and raw files yield a DenseMatrix. Throws IoError or
// ParseError.
using MatrixFile = std::variant<DenseMatrix, ObservedInstance>;
MatrixFile ReadMatrix(const std::filesystem::path& path, MatrixFormat format);

// Matrix Market array, CSV or raw-binary. Floats use 17 significant digits.
void WriteMatrix(const DenseMatrix& m, const std::filesystem::path& path,
                 MatrixFormat format);
// Matrix Market coordinate, row-major sorted.
void WriteSupported(const SupportedMatrix& s, const std::filesystem::path& path);

// `dir`/U.csv and `dir`/V.csv, r columns each.
void WriteFactors(const Factor& u, const Factor& v,
                  const std::filesystem::path& dir);
std::pair<Factor, Factor> ReadFactors(const std::filesystem::path& dir);

// Line-delimited JSON: one record per iteration, then a summary record.
void WriteTraceJsonl(const IterationTrace& trace, std::ostream& out);
void WriteReportJsonl(const ExperimentReport& report, std::ostream& out);

}  // namespace fastrpca

#endif  // FASTRPCA_MATRIX_IO_H_
