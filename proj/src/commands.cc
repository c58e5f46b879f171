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

#include "fastrpca/commands.h"

#include <cmath>
#include <fstream>
#include <utility>

#include <Eigen/Core>

#include "fastrpca/bench.h"
#include "fastrpca/errors.h"
#include "fastrpca/frames.h"
#include "fastrpca/matrix_io.h"
#include "fastrpca/metrics.h"
#include "fastrpca/synth.h"
#include "json.hpp"

namespace fastrpca {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

template <typename Config>
void ApplyFlags(const CliConfig& cli, Config& cfg) {
  if (cli.rank) cfg.rank = *cli.rank;
  if (cli.alpha) cfg.alpha = *cli.alpha;
  if (cli.gamma) cfg.gamma = *cli.gamma;
  if (cli.eta) cfg.eta = *cli.eta;
  if (cli.eta_c) cfg.eta_c = *cli.eta_c;
  if (cli.max_iters) cfg.max_iters = *cli.max_iters;
  if (cli.stop_tol) cfg.stop_tol = *cli.stop_tol;
  if (cli.mu) cfg.mu = *cli.mu;
  cfg.seed = cli.seed;
}

StepRule ParseStepRule(const std::string& name) {
  if (name == "theory") return StepRule::kTheory;
  if (name == "spectral") return StepRule::kSpectral;
  throw ConfigError("unknown step rule '" + name + "'");
}

MatrixFormat InputFormat(const CliConfig& cfg) {
  return cfg.format ? ParseMatrixFormat(*cfg.format) : FormatFromPath(cfg.input);
}

void RequireInput(const CliConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("--input is required");
  if (!fs::exists(cfg.input)) {
    throw IoError(cfg.input.string() + ": no such file or directory");
  }
}

void RequireOutput(const CliConfig& cfg) {
  if (cfg.output.empty()) throw ConfigError("--output is required");
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw IoError(cfg.output.string() + ": " + ec.message());
}

std::optional<GroundTruth> LoadTruth(const CliConfig& cfg, Index rank) {
  if (!cfg.truth) return std::nullopt;
  MatrixFile file = ReadMatrix(*cfg.truth, cfg.format
                                               ? ParseMatrixFormat(*cfg.format)
                                               : FormatFromPath(*cfg.truth));
  const auto* dense = std::get_if<DenseMatrix>(&file);
  if (dense == nullptr) throw ConfigError("--truth must be a dense matrix");
  return GroundTruth::FromDense(*dense, rank);
}

void WriteTrace(const CliConfig& cfg, const IterationTrace& trace) {
  const fs::path path = cfg.trace_out ? *cfg.trace_out : cfg.output / "trace.jsonl";
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError(path.string() + ": cannot open for writing");
  WriteTraceJsonl(trace, f);
  if (!f) throw IoError(path.string() + ": write failed");
}

json SolveSummary(const std::string& command, const SolveResult& result) {
  json s{{"type", "summary"},
         {"command", command},
         {"rank", result.factors.rank()},
         {"eta", result.eta},
         {"p", result.p},
         {"iterations",
          result.trace.records.empty() ? 0 : result.trace.records.back().iter},
         {"stopped_early", result.trace.stopped_early},
         {"sparse_nnz", result.sparse.nnz()},
         {"warnings", result.trace.warnings}};
  if (!result.trace.records.empty()) {
    const IterationRecord& last = result.trace.records.back();
    s["final_loss"] = last.loss;
    s["elapsed_seconds"] = last.elapsed_seconds;
    if (last.reconstruction_error) {
      s["reconstruction_error"] = *last.reconstruction_error;
    }
    if (last.factor_distance) s["factor_distance"] = *last.factor_distance;
  }
  return s;
}

void WriteSolveOutputs(const CliConfig& cfg, const std::string& command,
                       const SolveResult& result, std::ostream& out) {
  WriteFactors(result.factors.u, result.factors.v, cfg.output);
  WriteSupported(result.sparse, cfg.output / "S.mtx");
  WriteTrace(cfg, result.trace);
  out << SolveSummary(command, result).dump() << '\n';
}

std::string ExtensionOf(MatrixFormat f) {
  switch (f) {
    case MatrixFormat::kMatrixMarket:
      return ".mtx";
    case MatrixFormat::kCsv:
      return ".csv";
    case MatrixFormat::kRawBinary:
      return ".bin";
  }
  return "";
}

SynthSpec BenchSpec(const CliConfig& cfg) {
  SynthSpec spec = SynthSpec::Square(cfg.d, cfg.rank.value_or(5),
                                     cfg.alpha.value_or(0.1), cfg.seed);
  spec.Validate();
  return spec;
}

void EmitReport(const CliConfig& cfg, const ExperimentReport& report,
                std::ostream& out) {
  if (cfg.trace_out) {
    std::ofstream f(*cfg.trace_out, std::ios::trunc);
    if (!f) throw IoError(cfg.trace_out->string() + ": cannot open for writing");
    WriteReportJsonl(report, f);
    if (!f) throw IoError(cfg.trace_out->string() + ": write failed");
  } else {
    WriteReportJsonl(report, out);
  }
}

}  // namespace

void CliConfig::Validate() const {
  if (threads < 1) throw ConfigError("--threads must be >= 1");
  if (p && !(*p > 0.0 && *p <= 1.0)) throw ConfigError("--p must lie in (0, 1]");
  if (!(mask_threshold >= 0.0)) throw ConfigError("mask threshold must be >= 0");
  if (subsample && !p) throw ConfigError("--subsample requires --p");
  if (preset) PresetConfig(*preset);
  if (step_rule) ParseStepRule(*step_rule);
  if (format) ParseMatrixFormat(*format);
  if (d < 1) throw ConfigError("--d must be >= 1");
}

PartialSolverConfig PresetConfig(const std::string& name) {
  if (name == "fb-separation") {
    PartialSolverConfig cfg;
    cfg.rank = 10;
    cfg.alpha = 0.2;
    cfg.mu = 10.0;
    cfg.gamma = 1.0;
    cfg.eta_c = 0.5;
    cfg.step_rule = StepRule::kSpectral;
    cfg.stop_tol = 4e-4;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

FullSolverConfig ResolveFullConfig(const CliConfig& cli) {
  FullSolverConfig cfg;
  if (cli.preset) cfg = PresetConfig(*cli.preset);
  ApplyFlags(cli, cfg);
  cfg.Validate();
  return cfg;
}

PartialSolverConfig ResolvePartialConfig(const CliConfig& cli) {
  PartialSolverConfig cfg;
  if (cli.preset) cfg = PresetConfig(*cli.preset);
  ApplyFlags(cli, cfg);
  if (cli.p) cfg.p = *cli.p;
  if (cli.step_rule) cfg.step_rule = ParseStepRule(*cli.step_rule);
  return cfg;
}

void CmdDecompose(const CliConfig& cfg, std::ostream& out) {
  RequireInput(cfg);
  const FullSolverConfig solver = ResolveFullConfig(cfg);
  MatrixFile file = ReadMatrix(cfg.input, InputFormat(cfg));
  const auto* y = std::get_if<DenseMatrix>(&file);
  if (y == nullptr) {
    throw ConfigError("decompose needs a dense matrix; use complete for "
                      "coordinate files");
  }
  RequireOutput(cfg);
  const std::optional<GroundTruth> truth = LoadTruth(cfg, solver.rank);
  const SolveResult result = SolveFull(*y, solver, truth ? &*truth : nullptr);
  WriteSolveOutputs(cfg, "decompose", result, out);
}

void CmdComplete(const CliConfig& cfg, std::ostream& out) {
  RequireInput(cfg);
  PartialSolverConfig solver = ResolvePartialConfig(cfg);
  MatrixFile file = ReadMatrix(cfg.input, InputFormat(cfg));
  ObservedInstance inst;
  if (auto* obs = std::get_if<ObservedInstance>(&file)) {
    if (cfg.subsample) throw ConfigError("--subsample needs a dense input");
    inst = std::move(*obs);
  } else {
    const DenseMatrix& y = std::get<DenseMatrix>(file);
    inst = BernoulliSample(y, cfg.subsample ? *cfg.p : 1.0, cfg.seed);
  }
  RequireOutput(cfg);
  const std::optional<GroundTruth> truth = LoadTruth(cfg, solver.rank);
  const SolveResult result = SolvePartial(inst, solver, truth ? &*truth : nullptr);
  WriteSolveOutputs(cfg, "complete", result, out);
}

void CmdSeparate(const CliConfig& cfg, std::ostream& out) {
  RequireInput(cfg);
  CliConfig resolved = cfg;
  if (!resolved.preset) resolved.preset = "fb-separation";
  const FrameStack frames = ReadFrames(cfg.input);
  RequireOutput(cfg);

  SolveResult result;
  const double p = cfg.p.value_or(1.0);
  if (p < 1.0) {
    const ObservedInstance inst = BernoulliSample(frames.stack, p, cfg.seed);
    result = SolvePartial(inst, ResolvePartialConfig(resolved));
  } else {
    result = SolveFull(frames.stack, ResolveFullConfig(resolved));
  }

  const fs::path bg_dir = cfg.output / "background";
  const fs::path fg_dir = cfg.output / "foreground";
  for (const fs::path& d : {bg_dir, fg_dir}) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw IoError(d.string() + ": " + ec.message());
  }
  std::size_t foreground_pixels = 0;
  for (Index k = 0; k < frames.frames(); ++k) {
    const Eigen::VectorXd background =
        result.factors.u * result.factors.v.row(k).transpose();
    const Eigen::VectorXd y = frames.stack.values().col(k);
    Eigen::VectorXd mask(y.size());
    for (Index i = 0; i < y.size(); ++i) {
      const bool fg = std::abs(y(i) - background(i)) > cfg.mask_threshold;
      mask(i) = fg ? 1.0 : 0.0;
      foreground_pixels += fg ? 1 : 0;
    }
    const std::string& name = frames.names[static_cast<std::size_t>(k)];
    WritePgm(background, frames.height, frames.width, bg_dir / name);
    WritePgm(mask, frames.height, frames.width, fg_dir / name);
  }
  WriteFactors(result.factors.u, result.factors.v, cfg.output);
  WriteTrace(cfg, result.trace);
  json summary = SolveSummary("separate", result);
  summary["frames"] = frames.frames();
  summary["height"] = frames.height;
  summary["width"] = frames.width;
  summary["foreground_pixels"] = foreground_pixels;
  out << summary.dump() << '\n';
}

void CmdBenchConvergence(const CliConfig& cfg, std::ostream& out) {
  BenchSolverConfig solver;
  solver.full = ResolveFullConfig(cfg);
  solver.partial = ResolvePartialConfig(cfg);
  const std::vector<double> rates =
      cfg.rates.empty() ? std::vector<double>{1.0, 0.5, 0.2} : cfg.rates;
  ExperimentReport report = RunConvergenceExperiment(BenchSpec(cfg), rates, solver);
  EmitReport(cfg, report, out);
}

void CmdBenchScaling(const CliConfig& cfg, std::ostream& out) {
  const std::vector<Index> dims =
      cfg.dims.empty() ? std::vector<Index>{1000, 2000, 4000} : cfg.dims;
  const ExperimentReport report =
      RunScalingExperiment(dims, cfg.rank.value_or(5), cfg.alpha.value_or(0.1),
                           ResolvePartialConfig(cfg), cfg.seed);
  EmitReport(cfg, report, out);
}

void CmdGenerate(const CliConfig& cfg, std::ostream& out) {
  RequireOutput(cfg);
  const SynthSpec spec = BenchSpec(cfg);
  const MatrixFormat format =
      cfg.format ? ParseMatrixFormat(*cfg.format) : MatrixFormat::kCsv;
  const LowRankModel model = GenerateLowRank(spec);
  const SupportedMatrix corruption = GenerateCorruption(spec);
  const std::string ext = ExtensionOf(format);
  WriteMatrix(ComposeObservation(model, corruption), cfg.output / ("Y" + ext),
              format);
  WriteMatrix(model.Dense(), cfg.output / ("M" + ext), format);
  WriteSupported(corruption, cfg.output / "S.mtx");
  out << json{{"type", "summary"},
              {"command", "generate"},
              {"d", spec.d1},
              {"r", spec.r},
              {"alpha", spec.alpha},
              {"seed", spec.seed},
              {"corruption_nnz", corruption.nnz()},
              {"sigma_max", model.truth.sigma_max()},
              {"kappa", model.truth.kappa}}
             .dump()
      << '\n';
}

void WriteErrorRecord(std::ostream& err, int code, const std::string& kind,
                      const std::string& message) {
  err << json{{"type", "error"}, {"code", code}, {"kind", kind},
              {"message", message}}
             .dump()
      << '\n';
}

int RunCommand(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.Validate();
    Eigen::setNbThreads(cfg.threads);
    if (cfg.subcommand == "decompose") {
      CmdDecompose(cfg, out);
    } else if (cfg.subcommand == "complete") {
      CmdComplete(cfg, out);
    } else if (cfg.subcommand == "separate") {
      CmdSeparate(cfg, out);
    } else if (cfg.subcommand == "bench-convergence") {
      CmdBenchConvergence(cfg, out);
    } else if (cfg.subcommand == "bench-scaling") {
      CmdBenchScaling(cfg, out);
    } else if (cfg.subcommand == "generate") {
      CmdGenerate(cfg, out);
    } else {
      throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
    }
  } catch (const ConfigError& e) {
    WriteErrorRecord(err, kExitConfig, "config", e.what());
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    WriteErrorRecord(err, kExitConfig, "invalid-argument", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    WriteErrorRecord(err, kExitIo, "io", e.what());
    return kExitIo;
  } catch (const Diverged& e) {
    WriteErrorRecord(err, kExitDiverged, "diverged", e.what());
    return kExitDiverged;
  } catch (const SvdNotConverged& e) {
    WriteErrorRecord(err, kExitDiverged, "svd-not-converged", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    WriteErrorRecord(err, kExitFailure, "internal", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace fastrpca
