// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mglab: simulate learners in two-player Markov games and evaluate regret.
//
//   mglab simulate --config F --out D [--seeds N] [--force] [--timing]
//   mglab evaluate --run D --out F
//   mglab selftest

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mglab/harness.hpp"
#include "mglab/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mglab: online learning in two-player Markov games"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int seeds = 0;
  bool force = false, timing = false;
  auto* simulate = app.add_subcommand("simulate", "run an experiment config and write RunLogs + summary.csv");
  simulate->add_option("--config", config_path, "flat key=value config file")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_option("--seeds", seeds, "use seeds 0..N-1 instead of the config's list")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--force", force, "overwrite existing results in --out");
  simulate->add_flag("--timing", timing, "fill wall_ms (makes the CSV non-reproducible)");

  std::string run_dir, out_csv;
  auto* evaluate = app.add_subcommand("evaluate", "recompute one report row per RunLog in a run directory");
  evaluate->add_option("--run", run_dir, "directory written by simulate")->required();
  evaluate->add_option("--out", out_csv, "CSV file to write")->required();

  auto* selftest = app.add_subcommand("selftest", "run invariant checks on a built-in tiny game");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open config '" << config_path << "'\n";
        return 2;
      }
      mglab::ConfigMap map = mglab::ConfigMap::Parse(in, config_path);
      if (seeds > 0) map.Set("seeds", "0.." + std::to_string(seeds - 1));
      const mglab::ExperimentConfig cfg = mglab::LoadExperimentConfig(map);
      if (cfg.algorithm == mglab::Algorithm::kEpochV) {
        const double eta = cfg.Eta();
        const double lo = static_cast<double>(cfg.dims.TotalStates()) / static_cast<double>(cfg.K);
        if (eta < lo || eta > 1.0 / cfg.dims.horizon)
          std::cerr << "warning: eta = " << eta << " lies outside [|S|/K, 1/H] = [" << lo << ", "
                    << 1.0 / cfg.dims.horizon << "]\n";
      }
      const auto rows = mglab::RunExperiment(cfg, out_dir, {force, timing});
      std::cerr << "wrote " << cfg.seeds.size() << " run logs and " << rows.size()
                << " summary rows to " << out_dir << "\n";
      return 0;
    }
    if (*evaluate) {
      const auto rows = mglab::EvaluateRunDir(run_dir);
      std::ofstream out(out_csv, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << out_csv << "'\n";
        return 2;
      }
      mglab::WriteCsv(out, rows);
      return 0;
    }
    if (*selftest) return mglab::RunSelfTest(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
