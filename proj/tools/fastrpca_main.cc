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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fastrpca/commands.h"

namespace {

void AddSolverFlags(CLI::App* cmd, fastrpca::CliConfig& cfg) {
  cmd->add_option("--rank", cfg.rank, "Target rank r");
  cmd->add_option("--alpha", cfg.alpha, "Corruption fraction per row/column");
  cmd->add_option("--gamma", cfg.gamma, "Threshold inflation inside the loop");
  cmd->add_option("--eta", cfg.eta, "Explicit step size");
  cmd->add_option("--eta-c", cfg.eta_c, "Step constant when --eta is absent");
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap");
  cmd->add_option("--stop-tol", cfg.stop_tol, "Relative factor-change stop");
  cmd->add_option("--mu", cfg.mu, "Incoherence parameter");
  cmd->add_option("--p", cfg.p, "Observation rate");
  cmd->add_option("--step-rule", cfg.step_rule, "theory or spectral");
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--preset", cfg.preset, "Named preset (fb-separation)");
  cmd->add_option("--threads", cfg.threads, "Thread count");
  cmd->add_option("--trace-out", cfg.trace_out, "Trace / report output path");
  cmd->add_option("--format", cfg.format, "mm, csv or raw");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust PCA by projected gradient descent on factors"};
  app.require_subcommand(1);
  fastrpca::CliConfig cfg;

  CLI::App* decompose = app.add_subcommand("decompose", "Y -> U, V, S");
  CLI::App* complete =
      app.add_subcommand("complete", "Partially observed Y -> U, V, S");
  CLI::App* separate = app.add_subcommand(
      "separate", "Frame directory -> background frames and foreground masks");
  CLI::App* bench_conv = app.add_subcommand(
      "bench-convergence", "Error traces for several observation rates");
  CLI::App* bench_scale =
      app.add_subcommand("bench-scaling", "Wall time against dimension");
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic Y");

  for (CLI::App* cmd : {decompose, complete, separate, bench_conv, bench_scale,
                        generate}) {
    AddSolverFlags(cmd, cfg);
  }
  for (CLI::App* cmd : {decompose, complete, separate}) {
    cmd->add_option("-i,--input", cfg.input, "Input file or directory")
        ->required();
    cmd->add_option("-o,--output", cfg.output, "Output directory")->required();
  }
  for (CLI::App* cmd : {decompose, complete}) {
    cmd->add_option("--truth", cfg.truth, "Ground-truth low-rank matrix");
  }
  complete->add_flag("--subsample", cfg.subsample,
                     "Subsample a dense input at rate --p");
  separate->add_option("--mask-threshold", cfg.mask_threshold,
                       "Foreground threshold on |Y - background|");
  for (CLI::App* cmd : {bench_conv, generate}) {
    cmd->add_option("--d", cfg.d, "Dimension");
  }
  bench_conv->add_option("--rates", cfg.rates, "Observation rates")->delimiter(',');
  bench_scale->add_option("--dims", cfg.dims, "Increasing dimensions")->delimiter(',');
  generate->add_option("-o,--output", cfg.output, "Output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fastrpca::WriteErrorRecord(std::cerr, fastrpca::kExitConfig, "config",
                               e.what());
    return fastrpca::kExitConfig;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return fastrpca::RunCommand(cfg, std::cout, std::cerr);
}
