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

#include "fastrpca/bench.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "fastrpca/errors.h"

namespace fastrpca {
namespace {

void Summarize(RunRecord& run, const SolveResult& result) {
  run.trace = result.trace;
  run.eta = result.eta;
  if (!run.trace.records.empty()) {
    const IterationRecord& last = run.trace.records.back();
    run.final_error = last.reconstruction_error;
    run.final_distance = last.factor_distance;
    run.wall_seconds = last.elapsed_seconds;
  }
  run.decay_fit = MiddleThirdFit(run.trace);
  run.geometric_decay = run.decay_fit && run.decay_fit->slope < 0.0 &&
                        run.decay_fit->r_squared >= 0.9;
}

RunRecord RunOne(const std::string& label, const LowRankModel& model,
                 const SupportedMatrix& corruption, double p,
                 const BenchSolverConfig& cfg, std::uint64_t seed) {
  RunRecord run;
  run.label = label;
  run.d1 = model.a.rows();
  run.d2 = model.b.rows();
  run.p = p;
  try {
    if (p >= 1.0) {
      const DenseMatrix y = ComposeObservation(model, corruption);
      run.observed = static_cast<std::size_t>(y.rows() * y.cols());
      Summarize(run, SolveFull(y, cfg.full, &model.truth));
    } else {
      const ObservedInstance inst =
          SampleObservation(model, corruption, p, seed);
      run.observed = inst.observed.nnz();
      PartialSolverConfig partial = cfg.partial;
      partial.p = p;
      Summarize(run, SolvePartial(inst, partial, &model.truth));
    }
  } catch (const Error& e) {
    run.error = e.what();
  }
  return run;
}

std::string RateLabel(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "p=%.17g", p);
  return buf;
}

}  // namespace

std::optional<LinearFit> FitLine(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("FitLine: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::optional<LinearFit> LogErrorFit(const IterationTrace& trace,
                                     std::size_t first, std::size_t last) {
  std::vector<double> x, y;
  for (const IterationRecord& rec : trace.records) {
    if (rec.iter < first || rec.iter > last) continue;
    if (!rec.factor_distance || !(*rec.factor_distance > 0.0)) continue;
    x.push_back(static_cast<double>(rec.iter));
    y.push_back(std::log(*rec.factor_distance));
  }
  return FitLine(x, y);
}

std::optional<LinearFit> MiddleThirdFit(const IterationTrace& trace) {
  if (trace.records.empty() || !trace.records.front().factor_distance) {
    return std::nullopt;
  }
  const double floor = 1e-10 * *trace.records.front().factor_distance;
  std::size_t end = 0;
  for (const IterationRecord& rec : trace.records) {
    if (rec.factor_distance && *rec.factor_distance > floor) end = rec.iter;
  }
  if (end < 3) return std::nullopt;
  return LogErrorFit(trace, end / 3, (2 * end) / 3);
}

double ScalingRate(Index d, Index r) {
  const double dd = static_cast<double>(d);
  const double rr = static_cast<double>(r);
  return std::min(1.0, 0.15 * rr * rr * std::log(dd) / dd);
}

ExperimentReport RunConvergenceExperiment(const SynthSpec& spec,
                                          const std::vector<double>& p_list,
                                          const BenchSolverConfig& cfg) {
  ExperimentReport report;
  report.kind = "convergence";
  report.spec = spec;
  if (p_list.empty()) return report;
  for (double p : p_list) {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("rates must lie in (0, 1]");
  }
  const LowRankModel model = GenerateLowRank(spec);
  const SupportedMatrix corruption = GenerateCorruption(spec);
  for (double p : p_list) {
    report.runs.push_back(
        RunOne(RateLabel(p), model, corruption, p, cfg, spec.seed));
  }
  return report;
}

ExperimentReport RunScalingExperiment(const std::vector<Index>& d_list,
                                      Index r, double alpha,
                                      const PartialSolverConfig& cfg,
                                      std::uint64_t seed) {
  for (std::size_t i = 1; i < d_list.size(); ++i) {
    if (d_list[i] <= d_list[i - 1]) {
      throw ConfigError("scaling dims must be increasing");
    }
  }
  ExperimentReport report;
  report.kind = "scaling";
  report.spec = SynthSpec::Square(d_list.empty() ? 0 : d_list.back(), r, alpha,
                                  seed);
  report.notes = "p = 0.15 r^2 log(d) / d";
  BenchSolverConfig bench_cfg;
  bench_cfg.partial = cfg;
  bench_cfg.full = cfg;
  std::vector<double> log_d, log_t;
  for (Index d : d_list) {
    const SynthSpec spec = SynthSpec::Square(d, r, alpha, seed);
    const LowRankModel model = GenerateLowRank(spec);
    const SupportedMatrix corruption = GenerateCorruption(spec);
    RunRecord run = RunOne("d=" + std::to_string(d), model, corruption,
                           ScalingRate(d, r), bench_cfg, seed);
    if (run.ok() && run.wall_seconds > 0.0) {
      log_d.push_back(std::log(static_cast<double>(d)));
      log_t.push_back(std::log(run.wall_seconds));
    }
    report.runs.push_back(std::move(run));
  }
  report.scaling_fit = FitLine(log_d, log_t);
  return report;
}

ExperimentReport RunAccuracyVsTime(const SynthSpec& spec,
                                   const std::vector<AccuracyRun>& runs) {
  if (runs.empty()) throw ConfigError("at least one solver configuration");
  ExperimentReport report;
  report.kind = "accuracy-vs-time";
  report.spec = spec;
  const LowRankModel model = GenerateLowRank(spec);
  const SupportedMatrix corruption = GenerateCorruption(spec);
  for (const AccuracyRun& run : runs) {
    if (!(run.p > 0.0 && run.p <= 1.0)) {
      throw ConfigError("rates must lie in (0, 1]");
    }
    report.runs.push_back(
        RunOne(run.label.empty() ? RateLabel(run.p) : run.label, model,
               corruption, run.p, run.cfg, spec.seed));
  }
  return report;
}

}  // namespace fastrpca
