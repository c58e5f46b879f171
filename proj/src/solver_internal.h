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

#ifndef FASTRPCA_SRC_SOLVER_INTERNAL_H_
#define FASTRPCA_SRC_SOLVER_INTERNAL_H_

#include <chrono>

#include "fastrpca/full_solver.h"
#include "fastrpca/svd.h"

namespace fastrpca::internal {

using Clock = std::chrono::steady_clock;

inline double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// U0 = L Sigma^{1/2}, V0 = R Sigma^{1/2}, radii from the unprojected
// factors, then both projected.
FactorPair FactorsFromTriple(const SpectralTriple& triple, double mu);

// Appends ground-truth metrics (when available) and pushes the record.
void PushRecord(SolverState& state, IterationRecord record,
                const GroundTruth* truth);

// Throws Diverged for a non-finite loss or a >10x rise over 10 iterations.
void CheckDivergence(const IterationTrace& trace, double loss, std::size_t iter,
                     double scale);

double FactorChange(const Factor& u_old, const Factor& v_old,
                    const Factor& u_new, const Factor& v_new);

SolveResult Finish(SolverState state);

}  // namespace fastrpca::internal

#endif  // FASTRPCA_SRC_SOLVER_INTERNAL_H_
