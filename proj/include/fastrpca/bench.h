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

#ifndef FASTRPCA_BENCH_H_
#define FASTRPCA_BENCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fastrpca/full_solver.h"
#include "fastrpca/partial_solver.h"
#include "fastrpca/synth.h"

namespace fastrpca {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares y = slope x + intercept; absent for fewer than two points or
// constant x.
std::optional<LinearFit> FitLine(const std::vector<double>& x,
                                 const std::vector<double>& y);

// Fit of log(factor distance) against the iteration index over records
// [first, last]. Records without a positive distance are skipped.
std::optional<LinearFit> LogErrorFit(const IterationTrace& trace,
                                     std::size_t first, std::size_t last);

// Middle-third fit used by the convergence check. The window ends at the
// last record whose distance is above 1e-10 of the initial distance, so a
// run that has already hit the floating point floor is judged on its decay
// phase only.
std::optional<LinearFit> MiddleThirdFit(const IterationTrace& trace);

// Solver settings for one experiment: p = 1 runs use `full`, p < 1 runs use
// `partial` with its rate overridden.
struct BenchSolverConfig {
  FullSolverConfig full;
  PartialSolverConfig partial;
};

struct RunRecord {
  std::string label;
  Index d1 = 0;
  Index d2 = 0;
  double p = 1.0;
  std::size_t observed = 0;
  IterationTrace trace;
  double eta = 0.0;
  std::optional<double> final_error;  // relative reconstruction error
  std::optional<double> final_distance;
  double wall_seconds = 0.0;
  std::optional<LinearFit> decay_fit;
  bool geometric_decay = false;
  std::string error;  // non-empty when the run failed

  bool ok() const { return error.empty(); }
};

struct ExperimentReport {
  std::string kind;
  SynthSpec spec;
  std::vector<RunRecord> runs;
  // log(wall time) against log(d); scaling experiments only.
  std::optional<LinearFit> scaling_fit;
  std::string notes;
};

ExperimentReport RunConvergenceExperiment(const SynthSpec& spec,
                                          const std::vector<double>& p_list,
                                          const BenchSolverConfig& cfg);

// Runs the partial solver on a square d x d instance for each d at rate
// ScalingRate(d, r). All sizes share one seed.
ExperimentReport RunScalingExperiment(const std::vector<Index>& d_list,
                                      Index r, double alpha,
                                      const PartialSolverConfig& cfg,
                                      std::uint64_t seed);

double ScalingRate(Index d, Index r);

struct AccuracyRun {
  std::string label;
  double p = 1.0;
  BenchSolverConfig cfg;
};

ExperimentReport RunAccuracyVsTime(const SynthSpec& spec,
                                   const std::vector<AccuracyRun>& runs);

}  // namespace fastrpca

#endif  // FASTRPCA_BENCH_H_
