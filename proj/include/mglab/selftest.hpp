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

#pragma once

// Invariant checks on a built-in tiny game, runnable from the CLI.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mglab/harness.hpp"
#include "mglab/matrix_game.hpp"
#include "mglab/regret_eval.hpp"
#include "mglab/runlog_io.hpp"
#include "mglab/stats.hpp"

namespace mglab {

inline ExperimentConfig SelfTestConfig(Algorithm alg, OpponentKind opp, std::int64_t K) {
  ExperimentConfig c;
  c.dims = GameDims::Uniform(2, 2, 2, 2);
  c.game_seed = 3;
  c.algorithm = alg;
  c.K = K;
  c.iota_budget = K;
  c.checkpoints = {K};
  c.opponent = opp;
  if (opp == OpponentKind::kSwitching) c.switch_at = {K / 2 + 1};
  return c;
}

// Returns true when every check passes; prints one line per check.
inline bool RunSelfTest(std::ostream& out) {
  struct Check {
    std::string name;
    std::function<bool(std::string&)> fn;
  };
  std::vector<Check> checks;

  checks.push_back({"best response matches its policy value", [](std::string& detail) {
    const MarkovGame g = RandomGame(GameDims::Uniform(3, 2, 2, 3), 5);
    Rng rng(1);
    const MinPolicy nu = RandomPolicy<Side::kMin>(g, rng);
    const auto br = BestResponseMax(g, nu);
    const ValueTable v = PolicyValue(g, br.policy, nu);
    double worst = 0.0;
    for (int h = 0; h <= g.horizon(); ++h)
      for (int s = 0; s < g.num_states(h); ++s) worst = std::max(worst, std::abs(v(h, s) - br.values(h, s)));
    detail = "max deviation " + FormatDouble(worst);
    return worst <= 1e-12;
  }});

  checks.push_back({"LP minimax duality on random matrices", [](std::string& detail) {
    Rng rng(2);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      const int r = 2 + static_cast<int>(rng() % 4), c = 2 + static_cast<int>(rng() % 4);
      Matrix m(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = UniformUnit(rng) * 2.0 - 1.0;
      const auto sol = SolveZeroSum(m);
      const auto b = EvaluateStrategies(m, sol.row_strategy, sol.col_strategy);
      worst = std::max({worst, b.upper - b.lower, std::abs(b.lower - sol.value)});
    }
    detail = "max gap " + FormatDouble(worst);
    return worst <= 1e-8;
  }});

  auto run_checks = [](Algorithm alg, OpponentKind opp, std::string& detail) {
    const auto cfg = SelfTestConfig(alg, opp, 512);
    const MarkovGame game = BuildGame(cfg);
    const RunLog log = RunSeed(cfg, game, 7);
    RegretEvaluator eval(log);
    const RegretReport r = eval.Report(log.K());
    bool ok = r.enr >= r.nr - 1e-6;
    if (opp == OpponentKind::kFixed) ok = ok && r.extr && std::abs(r.enr - *r.extr) <= 1e-6;
    if (r.optimism_violations == 0) ok = ok && r.enr <= r.optimistic_gap + 1e-6;
    const auto bound = EpochCountBound(log.K(), cfg.Eta());
    ok = ok && r.max_epoch_count <= bound;
    std::ostringstream os;
    os << "ENR=" << FormatDouble(r.enr) << " NR=" << FormatDouble(r.nr)
       << " gap=" << FormatDouble(r.optimistic_gap) << " violations=" << r.optimism_violations
       << " epochs=" << r.max_epoch_count << "/" << bound << " restarts=" << r.restarts;
    detail = os.str();
    return ok;
  };
  checks.push_back({"epoch_v fixed opponent identities", [&](std::string& d) {
    return run_checks(Algorithm::kEpochV, OpponentKind::kFixed, d);
  }});
  checks.push_back({"epoch_v switching opponent identities", [&](std::string& d) {
    return run_checks(Algorithm::kEpochV, OpponentKind::kSwitching, d);
  }});
  checks.push_back({"adaptive_meta fixed opponent identities", [&](std::string& d) {
    return run_checks(Algorithm::kAdaptiveMeta, OpponentKind::kFixed, d);
  }});

  checks.push_back({"simulation and log serialization are deterministic", [](std::string& detail) {
    const auto cfg = SelfTestConfig(Algorithm::kAdaptiveMeta, OpponentKind::kSwitching, 256);
    const MarkovGame game = BuildGame(cfg);
    std::ostringstream a, b, c;
    WriteRunLog(a, RunSeed(cfg, game, 3));
    WriteRunLog(b, RunSeed(cfg, game, 3));
    std::istringstream in(a.str());
    WriteRunLog(c, ReadRunLog(in, "<memory>"));
    detail = std::to_string(a.str().size()) + " bytes";
    return a.str() == b.str() && a.str() == c.str();
  }});

  checks.push_back({"fixed-opponent ENR slope over K = 2^6..2^10", [](std::string& detail) {
    auto cfg = SelfTestConfig(Algorithm::kEpochV, OpponentKind::kFixed, 1024);
    cfg.iota_scale = 0.05;
    cfg.checkpoints = {64, 128, 256, 512, 1024};
    const MarkovGame game = BuildGame(cfg);
    std::vector<double> ks, mean(cfg.checkpoints.size(), 0.0);
    const int seeds = 4;
    for (int s = 0; s < seeds; ++s) {
      const auto rows = SummarizeRun(RunSeed(cfg, game, s), cfg.checkpoints);
      for (std::size_t i = 0; i < rows.size(); ++i) mean[i] += rows[i].enr / seeds;
    }
    for (auto k : cfg.checkpoints) ks.push_back(static_cast<double>(k));
    for (double m : mean)
      if (!(m > 0.0)) {
        detail = "non-positive mean ENR";
        return false;
      }
    const LineFit f = FitLogLog(ks, mean);
    detail = "slope " + FormatDouble(std::round(f.slope * 1e4) / 1e4);
    return std::isfinite(f.slope);
  }});

  bool all = true;
  for (const auto& c : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << c.name << (detail.empty() ? "" : "  (" + detail + ")") << '\n';
  }
  out << (all ? "selftest passed\n" : "selftest FAILED\n");
  return all;
}

}  // namespace mglab
