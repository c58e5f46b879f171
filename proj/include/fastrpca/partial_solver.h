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

#ifndef FASTRPCA_PARTIAL_SOLVER_H_
#define FASTRPCA_PARTIAL_SOLVER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "fastrpca/full_solver.h"
#include "fastrpca/matrix.h"
#include "fastrpca/metrics.h"

namespace fastrpca {

// How the default step size is derived when no explicit eta is given.
enum class StepRule {
  kTheory,    // eta = eta_c / (mu r sigma_1(U0 V0^T))
  kSpectral,  // eta = eta_c / sigma_1(U0 V0^T)
};

struct PartialSolverConfig : FullSolverConfig {
  PartialSolverConfig() { gamma = 3.0; }
  // Observation rate; estimated as |Phi| / (d1 d2) when absent.
  std::optional<double> p;
  StepRule step_rule = StepRule::kTheory;

  // Throws ConfigError; `rate` is the rate the solve will use.
  void Validate(double rate) const;
};

// Values of Y on the revealed set Phi.
struct ObservedInstance {
  SupportedMatrix observed;

  Index rows() const { return observed.rows(); }
  Index cols() const { return observed.cols(); }
};

// Reveals each entry independently with probability p, drawing one
// counter-based uniform per (seed, i, j).
ObservedInstance BernoulliSample(const DenseMatrix& m, double p,
                                 std::uint64_t seed);
// As above, evaluating `value(i, j)` only at revealed coordinates.
ObservedInstance BernoulliSample(Index rows, Index cols,
                                 const std::function<double(Index, Index)>& value,
                                 double p, std::uint64_t seed);

// |Phi| / (d1 d2)
double EstimateRate(const ObservedInstance& inst);

// 1/(2p) ||Pi_Phi(U V^T + S - Y)||_F^2, touching only Phi. Throws
// InvalidArgument when S escapes Phi.
double LossPartial(const Factor& u, const Factor& v, const SupportedMatrix& s,
                   const ObservedInstance& inst, double p);

// ((1/p) Pi_Phi(U V^T + S - Y) V, (1/p) Pi_Phi(U V^T + S - Y)^T U)
std::pair<Factor, Factor> GradientPartial(const Factor& u, const Factor& v,
                                          const SupportedMatrix& s,
                                          const ObservedInstance& inst,
                                          double p);

// 1/64 ||U^T U - V^T V||_F^2
double RegularizerPartial(const Factor& u, const Factor& v);

// (1/16 U (U^T U - V^T V), 1/16 V (V^T V - U^T U))
std::pair<Factor, Factor> RegularizerPartialGradient(const Factor& u,
                                                     const Factor& v);

// S_init = T_{2 p alpha}(Pi_Phi(Y)); factors from the rank-r SVD of
// (1/p)(Y - S_init) restricted to Phi; radii as in InitializeFull.
SolverState InitializePartial(const ObservedInstance& inst,
                              const PartialSolverConfig& cfg,
                              const GroundTruth* truth = nullptr);

// S_t = T_{gamma p alpha}(Pi_Phi(Y - U_t V_t^T)), then a projected step on
// the partial loss plus the 1/64 regularizer (1/16 in the update).
SolverState StepPartial(SolverState state, const ObservedInstance& inst,
                        const PartialSolverConfig& cfg,
                        const GroundTruth* truth = nullptr);

// Never forms a d1 x d2 matrix.
SolveResult SolvePartial(const ObservedInstance& inst,
                         const PartialSolverConfig& cfg,
                         const GroundTruth* truth = nullptr);

}  // namespace fastrpca

#endif  // FASTRPCA_PARTIAL_SOLVER_H_
