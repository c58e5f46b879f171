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

#ifndef FASTRPCA_COMMANDS_H_
#define FASTRPCA_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fastrpca/full_solver.h"
#include "fastrpca/partial_solver.h"

namespace fastrpca {

// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitDiverged = 4,
};

struct CliConfig {
  std::string subcommand;
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> truth;  // M*, for error reporting
  std::optional<std::string> format;           // input/output matrix format
  std::optional<std::string> preset;

  // Solver parameters; absent ones take the preset value, then the solver
  // default.
  std::optional<Index> rank;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> eta;
  std::optional<double> eta_c;
  std::optional<std::size_t> max_iters;
  std::optional<double> stop_tol;
  std::optional<double> p;
  std::optional<double> mu;
  std::optional<std::string> step_rule;  // "theory" or "spectral"
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<std::filesystem::path> trace_out;

  // complete: subsample a dense input at rate p before solving.
  bool subsample = false;
  // separate: foreground where |Y - background| exceeds this.
  double mask_threshold = 0.1;

  // generate / bench-convergence
  Index d = 500;
  std::vector<double> rates;
  // bench-scaling
  std::vector<Index> dims;

  // Throws ConfigError.
  void Validate() const;
};

// Named solver presets. "fb-separation": r = 10, alpha = 0.2, mu = 10,
// gamma = 1, eta = 1 / (2 sigma_1(U0 V0^T)), stop_tol = 4e-4.
PartialSolverConfig PresetConfig(const std::string& name);

// Preset, then explicit flags, layered over the solver defaults.
FullSolverConfig ResolveFullConfig(const CliConfig& cfg);
PartialSolverConfig ResolvePartialConfig(const CliConfig& cfg);

// Each command throws on failure; RunCommand maps the exception to an exit
// code and a one-line JSON error record on `err`.
void CmdDecompose(const CliConfig& cfg, std::ostream& out);
void CmdComplete(const CliConfig& cfg, std::ostream& out);
void CmdSeparate(const CliConfig& cfg, std::ostream& out);
void CmdBenchConvergence(const CliConfig& cfg, std::ostream& out);
void CmdBenchScaling(const CliConfig& cfg, std::ostream& out);
void CmdGenerate(const CliConfig& cfg, std::ostream& out);

int RunCommand(const CliConfig& cfg, std::ostream& out, std::ostream& err);

// {"type":"error","code":...,"kind":...,"message":...}
void WriteErrorRecord(std::ostream& err, int code, const std::string& kind,
                      const std::string& message);

}  // namespace fastrpca

#endif  // FASTRPCA_COMMANDS_H_
