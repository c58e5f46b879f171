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

#ifndef FASTRPCA_FULL_SOLVER_H_
#define FASTRPCA_FULL_SOLVER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fastrpca/matrix.h"
#include "fastrpca/metrics.h"

namespace fastrpca {

struct FullSolverConfig {
  Index rank = 1;
  double alpha = 0.0;
  double gamma = 2.0;
  // Explicit step size; when absent, eta = eta_c / sigma_1(U0 V0^T).
  std::optional<double> eta;
  double eta_c = 1.0 / 36.0;
  std::size_t max_iters = 500;
  // Incoherence parameter setting the row-norm radii of the constraint sets.
  double mu = 10.0;
  // Stop once (||dU||_F^2 + ||dV||_F^2) / (||U||_F^2 + ||V||_F^2) <= stop_tol.
  double stop_tol = 4e-4;
  std::uint64_t seed = 0;
  double svd_tol = 1e-8;
  std::size_t svd_max_sweeps = 2000;

  // Throws ConfigError.
  void Validate() const;
};

// U (d1 x r), V (d2 x r) and the row-norm radii of their constraint sets.
struct FactorPair {
  Factor u;
  Factor v;
  double radius_u = 0.0;
  double radius_v = 0.0;

  Index rank() const { return u.cols(); }
};

// One trace row. Row 0 describes the initialization; row t >= 1 carries the
// objective evaluated inside the step that produced (U_t, V_t) and the
// metrics of (U_t, V_t) itself.
struct IterationRecord {
  std::size_t iter = 0;
  double loss = 0.0;
  double regularizer = 0.0;
  // Relative change of the factors in this step (0 for row 0).
  double factor_change = 0.0;
  std::optional<double> reconstruction_error;  // relative
  std::optional<double> factor_distance;
  // Solver time since the start of initialization, excluding metric
  // evaluation.
  double elapsed_seconds = 0.0;
  // Multiply-add count of the kernels run in this step.
  std::uint64_t work = 0;
  std::size_t sparse_nnz = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  std::vector<std::string> warnings;
  bool stopped_early = false;
};

struct SolverState {
  FactorPair factors;
  SupportedMatrix sparse;
  std::size_t iter = 0;
  IterationTrace trace;
  double eta = 0.0;
  // Observation rate (1 for the fully observed solver).
  double p = 1.0;
  // Accumulated solver seconds.
  double elapsed_seconds = 0.0;
};

struct SolveResult {
  FactorPair factors;
  SupportedMatrix sparse;
  IterationTrace trace;
  double eta = 0.0;
  double p = 1.0;
};

// Each row whose 2-norm exceeds `radius` is rescaled onto the radius.
Factor ConstraintProject(const Factor& m, double radius);

// 1/8 ||U^T U - V^T V||_F^2
double Regularizer(const Factor& u, const Factor& v);

// (1/2 U (U^T U - V^T V), 1/2 V (V^T V - U^T U))
std::pair<Factor, Factor> RegularizerGradient(const Factor& u, const Factor& v);

// 1/2 ||U V^T + S - Y||_F^2
double LossFull(const Factor& u, const Factor& v, const SupportedMatrix& s,
                const DenseMatrix& y);

// ((U V^T + S - Y) V, (U V^T + S - Y)^T U)
std::pair<Factor, Factor> GradientFull(const Factor& u, const Factor& v,
                                       const SupportedMatrix& s,
                                       const DenseMatrix& y);

// Largest singular value of U V^T, computed on the r x r core.
double LowRankOperatorNorm(const Factor& u, const Factor& v);

// S_init = T_alpha(Y); U0 = L Sigma^{1/2}, V0 = R Sigma^{1/2} from the
// rank-r SVD of Y - S_init; radii sqrt(2 mu r / d) ||U0||_op frozen before
// projecting U0, V0 onto their sets.
SolverState InitializeFull(const DenseMatrix& y, const FullSolverConfig& cfg,
                           const GroundTruth* truth = nullptr);

// S_t = T_{gamma alpha}(Y - U_t V_t^T), then one projected gradient step on
// the loss plus the balancing regularizer. Throws Diverged when the loss is
// non-finite or grows more than tenfold over ten iterations.
SolverState StepFull(SolverState state, const DenseMatrix& y,
                     const FullSolverConfig& cfg,
                     const GroundTruth* truth = nullptr);

// Initialization then steps until max_iters or the factor-stability rule.
SolveResult SolveFull(const DenseMatrix& y, const FullSolverConfig& cfg,
                      const GroundTruth* truth = nullptr);

}  // namespace fastrpca

#endif  // FASTRPCA_FULL_SOLVER_H_
