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

#ifndef FASTRPCA_SPARSE_ESTIMATOR_H_
#define FASTRPCA_SPARSE_ESTIMATOR_H_

#include <cstdint>
#include <vector>

#include "fastrpca/matrix.h"

namespace fastrpca {

// Per-row and per-column keep counts derived from a corruption fraction:
// k_row = floor(fraction * cols), k_col = floor(fraction * rows).
struct SparsityBudget {
  double fraction = 0.0;
  Index rows = 0;
  Index cols = 0;
  Index k_row = 0;
  Index k_col = 0;

  // fraction must lie in [0, 1].
  static SparsityBudget Make(double fraction, Index rows, Index cols);
};

// Keeps A(i,j) when it is simultaneously among the k_row largest magnitudes
// of row i and the k_col largest magnitudes of column j. Ranks order by
// magnitude, then by the smaller coordinate, so the output always belongs to
// the sparsity class at `budget.fraction`. Exact zeros are never stored.
SupportedMatrix HardThreshold(const DenseMatrix& a,
                              const SparsityBudget& budget);

// Same rule on the matrix that is zero off the support of `a`; the output
// support is a subset of the input support.
SupportedMatrix HardThresholdOnSupport(const SupportedMatrix& a,
                                       const SparsityBudget& budget);

// Keep mask aligned with a.entries(); HardThresholdOnSupport without the
// final copy.
std::vector<std::uint8_t> SelectOnSupport(const SupportedMatrix& a,
                                          const SparsityBudget& budget);

// At most fraction*cols nonzeros in each row and fraction*rows in each
// column.
bool IsInSparsityClass(const SupportedMatrix& a, double fraction);

}  // namespace fastrpca

#endif  // FASTRPCA_SPARSE_ESTIMATOR_H_
