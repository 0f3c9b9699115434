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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "mglab/harness.hpp"
#include "mglab/stats.hpp"
#include "test_util.hpp"

#ifndef MGLAB_CLI_PATH
#define MGLAB_CLI_PATH ""
#endif

namespace mglab {
namespace {

namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-6;
constexpr int kMaxViolatingRuns = 5;
constexpr double kFixedSlopeMax = 0.65;
constexpr double kSwitchSlopeMax = 0.8;
constexpr double kRestartShareMin = 0.80;
constexpr double kQuietShareMin = 0.95;
constexpr double kFictitiousPlayTol = 1e-4;
constexpr double kGridTol = 1e-3;
constexpr double kBanditSlopeMax = 0.6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Reference game: H = 3, two states per step, two actions per player.
constexpr const char* kReferenceGame =
    "game.horizon = 3\ngame.states = 2\ngame.actions_a = 2\ngame.actions_b = 2\ngame.seed = 1\n";

ExperimentConfig Config(const std::string& extra, int num_seeds) {
  ExperimentConfig c =
      LoadExperimentConfig(ConfigMap::FromString(std::string(kReferenceGame) + extra, "acceptance"));
  c.seeds.clear();
  for (int s = 0; s < num_seeds; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
  return c;
}

std::vector<RunLog> RunAll(const ExperimentConfig& c) {
  const MarkovGame game = BuildGame(c);
  std::vector<RunLog> logs(c.seeds.size());
  ParallelFor(c.seeds.size(), [&](std::size_t i) { logs[i] = RunSeed(c, game, c.seeds[i]); });
  return logs;
}

// Mean ENR per checkpoint across seeds, plus per-seed restart counts at K.
struct Sweep {
  std::vector<double> checkpoints;
  std::vector<double> mean_enr;
  std::vector<std::int64_t> restarts;
  std::vector<RunLog> logs;
};

Sweep RunSweep(const ExperimentConfig& c) {
  Sweep out;
  out.logs = RunAll(c);
  std::vector<std::vector<SummaryRow>> rows(out.logs.size());
  ParallelFor(out.logs.size(), [&](std::size_t i) { rows[i] = SummarizeRun(out.logs[i], c.checkpoints); });
  out.checkpoints.assign(c.checkpoints.begin(), c.checkpoints.end());
  out.mean_enr.assign(c.checkpoints.size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) out.mean_enr[j] += r[j].enr / static_cast<double>(rows.size());
    out.restarts.push_back(r.back().restarts);
  }
  return out;
}

std::string Curve(const Sweep& s) {
  std::string text;
  for (std::size_t j = 0; j < s.mean_enr.size(); ++j) {
    if (j) text += ' ';
    text += Fmt(s.mean_enr[j]);
  }
  return text;
}

// ---------------------------------------------------------------------------

Outcome EpochCountLaw() {
  const std::int64_t K = 8192;
  std::string detail;
  bool pass = true;
  for (const char* eta : {"1/H", "0.125"}) {
    const ExperimentConfig c = Config("learner.K = 8192\nlearner.eta = " + std::string(eta) + "\n", 50);
    const double e = c.Eta();
    const auto bound = static_cast<std::int64_t>(std::ceil((1.0 + e) * std::log(static_cast<double>(K)) / e));
    std::int64_t most = 0;
    for (const RunLog& log : RunAll(c)) {
      // One value change per completed epoch; the running epoch counts too.
      std::vector<std::vector<std::int64_t>> epochs(c.dims.horizon);
      for (int h = 0; h < c.dims.horizon; ++h) epochs[h].assign(c.dims.states[h], 1);
      for (const auto& ch : log.value_changes) ++epochs[ch.h][ch.s];
      for (const auto& layer : epochs)
        for (auto n : layer) {
          most = std::max(most, n);
          if (n > bound) pass = false;
        }
    }
    if (!detail.empty()) detail += "; ";
    detail += "eta=" + Fmt(e) + " max epochs " + std::to_string(most) + " bound " + std::to_string(bound);
  }
  return {pass, detail};
}

Outcome Optimism() {
  int violating = 0;
  int runs = 0;
  for (const char* opp : {"opponent.kind = fixed\n", "opponent.kind = switching\nopponent.switch_at = 683, 1366\n"}) {
    const ExperimentConfig c = Config("learner.K = 2048\nlearner.delta = 0.05\n" + std::string(opp), 100);
    const auto logs = RunAll(c);
    std::vector<std::int64_t> v(logs.size(), 0);
    ParallelFor(logs.size(), [&](std::size_t i) {
      RegretEvaluator eval(logs[i]);
      v[i] = eval.Optimism(c.K, eval.EmpiricalNash(c.K)).violations;
    });
    for (auto x : v) violating += x > 0;
    runs += static_cast<int>(logs.size());
  }
  return {violating <= kMaxViolatingRuns,
          std::to_string(violating) + " of " + std::to_string(runs) + " runs with a violation"};
}

// Both algorithms against every opponent kind, theory iota.
std::vector<RunLog> IdentitySweep() {
  std::vector<RunLog> all;
  for (const char* alg : {"epoch_v", "adaptive_meta"})
    for (const char* opp : {"fixed", "switching", "drifting", "random_each_switch", "best_response"}) {
      const ExperimentConfig c =
          Config(std::string("learner.K = 2048\nalgorithm = ") + alg + "\nopponent.kind = " + opp +
                     "\nopponent.switch_period = 500\n",
                 6);
      for (auto& log : RunAll(c)) all.push_back(std::move(log));
    }
  return all;
}

const std::vector<std::int64_t> kPrefixes{256, 1024, 2048};

Outcome Fact1Identities() {
  const auto logs = IdentitySweep();
  std::vector<double> worst_nr(logs.size(), -1e300), worst_ext(logs.size(), 0.0);
  std::vector<char> ok(logs.size(), 1);
  ParallelFor(logs.size(), [&](std::size_t i) {
    RegretEvaluator eval(logs[i]);
    for (auto k : kPrefixes) {
      const RegretReport r = eval.Report(k);
      worst_nr[i] = std::max(worst_nr[i], r.nr - r.enr);
      if (r.nr > r.enr + kIdentityTol) ok[i] = 0;
      if (logs[i].opponent_kind == "fixed") {
        if (!r.extr) {
          ok[i] = 0;
          continue;
        }
        worst_ext[i] = std::max(worst_ext[i], std::abs(r.enr - *r.extr));
        if (std::abs(r.enr - *r.extr) > kIdentityTol) ok[i] = 0;
      }
    }
  });
  const bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return {pass, std::to_string(logs.size()) + " runs; max NR-ENR " +
                    Fmt(*std::max_element(worst_nr.begin(), worst_nr.end())) + ", max |ENR-ExtR| " +
                    Fmt(*std::max_element(worst_ext.begin(), worst_ext.end()))};
}

Outcome Sandwich() {
  const auto logs = IdentitySweep();
  std::vector<int> checked(logs.size(), 0), failed(logs.size(), 0);
  std::vector<double> worst(logs.size(), -1e300);
  ParallelFor(logs.size(), [&](std::size_t i) {
    RegretEvaluator eval(logs[i]);
    for (auto k : kPrefixes) {
      const RegretReport r = eval.Report(k);
      if (r.optimism_violations > 0) continue;
      ++checked[i];
      worst[i] = std::max(worst[i], r.enr - r.optimistic_gap);
      if (r.enr > r.optimistic_gap + kIdentityTol) ++failed[i];
    }
  });
  int n = 0, bad = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    n += checked[i];
    bad += failed[i];
  }
  return {bad == 0 && n > 0, std::to_string(n) + " violation-free evaluations; max ENR-gap " +
                                 Fmt(*std::max_element(worst.begin(), worst.end()))};
}

constexpr const char* kRateSweep =
    "learner.K = 16384\nlearner.checkpoints = 1024, 2048, 4096, 8192, 16384\nlearner.eta = 1/H\n"
    "learner.iota_scale = 0.05\n";

Outcome SlopeOutcome(const Sweep& s, double limit, std::string* slope_text) {
  for (double e : s.mean_enr)
    if (!(e > 0.0)) {
      *slope_text = "undefined (non-positive mean ENR)";
      return {false, ""};
    }
  const LineFit fit = FitLogLog(s.checkpoints, s.mean_enr);
  *slope_text = Fmt(fit.slope);
  return {fit.slope <= limit, ""};
}

Outcome FixedOpponentRate() {
  const Sweep s = RunSweep(Config(kRateSweep, 20));
  std::string slope;
  Outcome o = SlopeOutcome(s, kFixedSlopeMax, &slope);
  o.detail = "slope " + slope + " (limit " + Fmt(kFixedSlopeMax) + "); mean ENR " + Curve(s);
  return o;
}

// Largest Phi/D seen in any sub-block, recomputed from the logged episodes.
double MaxPhiOverThreshold(const RunLog& log, double c0) {
  const GameDims& dims = log.game.dims();
  const double K = static_cast<double>(log.K());
  const double S = dims.TotalStates();
  const double scale = c0 * dims.horizon;
  double best = 0.0;
  for (std::size_t i = 0; i < log.instances.size(); ++i) {
    const SubBlockStart& inst = log.instances[i];
    const std::int64_t first = inst.episode;
    const std::int64_t last = i + 1 < log.instances.size() ? log.instances[i + 1].episode - 1 : log.K();
    const bool final_sub_block = inst.sub_block == (std::int64_t{1} << (2 * inst.block)) + 1;
    double deficit = 0.0;
    for (std::int64_t k = first; k <= last; ++k) {
      const auto& rec = log.episodes[k - 1];
      deficit += rec.v1_optimistic - rec.trajectory.Return();
      const double t = static_cast<double>(k - first + 1);
      const double phi = deficit + std::sqrt(inst.iota * t);
      const double d = final_sub_block ? 4.0 * scale * std::sqrt(inst.iota * S * K * std::log(K) / inst.eta)
                                       : 3.0 * scale * std::sqrt(inst.iota * S * t * std::log(K) / inst.eta);
      best = std::max(best, phi / d);
    }
  }
  return best;
}

Outcome NonStationarySeparation() {
  const Sweep moving = RunSweep(Config(std::string(kRateSweep) +
                                           "algorithm = adaptive_meta\nopponent.kind = switching\n"
                                           "opponent.switch_at = 5462, 10923\n",
                                       20));
  const Sweep fixed = RunSweep(Config(std::string(kRateSweep) + "algorithm = adaptive_meta\n", 20));
  std::string slope;
  const bool slope_ok = SlopeOutcome(moving, kSwitchSlopeMax, &slope).pass;
  auto share = [](const std::vector<std::int64_t>& r, bool want_restart) {
    const auto n = std::count_if(r.begin(), r.end(), [&](std::int64_t x) { return (x > 0) == want_restart; });
    return static_cast<double>(n) / static_cast<double>(r.size());
  };
  const double restart_share = share(moving.restarts, true);
  const double quiet_share = share(fixed.restarts, false);
  double ratio = 0.0;
  for (const auto& log : moving.logs) ratio = std::max(ratio, MaxPhiOverThreshold(log, 2.0));
  const bool pass = slope_ok && restart_share >= kRestartShareMin && quiet_share >= kQuietShareMin;
  return {pass, "switching slope " + slope + " (limit " + Fmt(kSwitchSlopeMax) + "); restart share " +
                    Fmt(restart_share) + " (min " + Fmt(kRestartShareMin) + "); fixed quiet share " +
                    Fmt(quiet_share) + " (min " + Fmt(kQuietShareMin) + "); max Phi/D " + Fmt(ratio) +
                    "; mean ENR " + Curve(moving)};
}

Outcome LpOracles() {
  Rng rng(SplitMix64(2024));
  double worst_fp = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int r = 3 + static_cast<int>(UniformUnit(rng) * 3.0);
    const int c = 3 + static_cast<int>(UniformUnit(rng) * 3.0);
    const Matrix m = testing::RandomMatrix(r, c, rng);
    worst_fp = std::max(worst_fp, std::abs(SolveZeroSum(m).value - testing::FictitiousPlay(m, 100000).value()));
  }
  double worst_grid = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MarkovGame g = RandomGame(GameDims::Uniform(2, 2, 2, 2), 7000 + seed);
    Rng prng(SplitMix64(seed));
    const std::vector<MinPolicy> logged{RandomPolicy<Side::kMin>(g, prng), RandomPolicy<Side::kMin>(g, prng)};
    std::vector<std::vector<std::vector<std::vector<double>>>> sets(2);
    for (int h = 0; h < 2; ++h) {
      sets[h].resize(2);
      for (int s = 0; s < 2; ++s)
        for (const auto& nu : logged) {
          const auto p = nu.at(h, s);
          sets[h][s].emplace_back(p.begin(), p.end());
        }
    }
    const auto grid = testing::GridRecursionValues(g, sets, 0.01);
    const NashTable t = EmpiricalNashValues(g, logged);
    for (int h = 0; h < 2; ++h)
      for (int s = 0; s < 2; ++s) worst_grid = std::max(worst_grid, std::abs(grid[h][s] - t.values(h, s)));
  }
  return {worst_fp <= kFictitiousPlayTol && worst_grid <= kGridTol,
          "max |LP-FP| " + Fmt(worst_fp) + " (tol " + Fmt(kFictitiousPlayTol) + "), max |LP-grid| " +
              Fmt(worst_grid) + " (tol " + Fmt(kGridTol) + ")"};
}

Outcome BanditRate() {
  const std::vector<std::int64_t> marks{1000, 3162, 10000, 31623, 100000};
  const int seeds = 100;
  std::vector<std::vector<double>> per_seed(seeds, std::vector<double>(marks.size(), 0.0));
  ParallelFor(seeds, [&](std::size_t seed) {
    TsallisIxBandit b(2);
    Rng rng(SplitMix64(90000 + seed));
    double regret = 0.0;
    std::size_t m = 0;
    for (std::int64_t t = 1; t <= marks.back(); ++t) {
      const auto p = b.distribution();
      regret += 0.2 * p[1];
      const int arm = SampleIndex(p, UniformUnit(rng));
      const double mean = arm == 0 ? 0.6 : 0.4;
      b.Update(arm, UniformUnit(rng) < mean ? 1.0 : 0.0);
      if (t == marks[m]) per_seed[seed][m++] = regret;
    }
  });
  std::vector<double> mean(marks.size(), 0.0);
  for (const auto& r : per_seed)
    for (std::size_t j = 0; j < r.size(); ++j) mean[j] += r[j] / seeds;
  const std::vector<double> xs(marks.begin(), marks.end());
  const LineFit fit = FitLogLog(xs, mean);
  return {fit.slope <= kBanditSlopeMax, "slope " + Fmt(fit.slope) + " (limit " + Fmt(kBanditSlopeMax) +
                                            "); regret at 1e5 " + Fmt(mean.back())};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// True when both directories hold the same file names with identical bytes.
bool SameTree(const fs::path& a, const fs::path& b, std::string* why) {
  std::vector<std::string> na, nb;
  for (const auto& e : fs::directory_iterator(a)) na.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) nb.push_back(e.path().filename().string());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) {
    *why = "file lists differ";
    return false;
  }
  for (const auto& n : na)
    if (Slurp(a / n) != Slurp(b / n)) {
      *why = n + " differs";
      return false;
    }
  return !na.empty();
}

Outcome Determinism(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "simulate binary not found: '" + cli + "'"};
  const fs::path root = fs::temp_directory_path() / ("mglab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const std::vector<std::string> configs{
      "learner.K = 600\nseeds = 0..3\nopponent.kind = fixed\n",
      "learner.K = 600\nseeds = 0..3\nalgorithm = adaptive_meta\nopponent.kind = switching\n"
      "opponent.switch_at = 200, 400\nlearner.iota_scale = 0.05\n",
      "learner.K = 300\nseeds = 5, 9\nopponent.kind = best_response\nbandit.doubling = true\n"};
  std::string detail;
  bool pass = true;
  int files = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const fs::path cfg = root / ("c" + std::to_string(i) + ".cfg");
    std::ofstream(cfg) << kReferenceGame << configs[i];
    for (const char* run : {"a", "b"}) {
      const std::string cmd = "\"" + cli + "\" simulate --config \"" + cfg.string() + "\" --out \"" +
                              (root / (std::to_string(i) + run)).string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        fs::remove_all(root);
        return {false, "simulate failed for config " + std::to_string(i)};
      }
    }
    std::string why;
    if (!SameTree(root / (std::to_string(i) + "a"), root / (std::to_string(i) + "b"), &why)) {
      pass = false;
      detail += "config " + std::to_string(i) + ": " + why + "; ";
    }
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(root / (std::to_string(i) + "a"))) ++files;
  }
  fs::remove_all(root);
  if (pass) detail = std::to_string(configs.size()) + " configs, " + std::to_string(files) + " files identical";
  return {pass, detail};
}

}  // namespace
}  // namespace mglab

int main(int argc, char** argv) {
  using namespace mglab;
  CLI::App app{"mglab acceptance suite"};
  std::vector<int> only;
  std::string cli = MGLAB_CLI_PATH;
  app.add_option("--criterion", only, "run only these criteria (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--cli", cli, "path to the mglab binary used by criterion 9");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"epoch count stays within the logarithmic bound", EpochCountLaw},
      {"optimistic values dominate empirical Nash values", Optimism},
      {"ENR >= NR, and ENR == ExtR for a fixed opponent", Fact1Identities},
      {"ENR <= optimistic gap on violation-free runs", Sandwich},
      {"fixed-opponent ENR grows like sqrt(K)", FixedOpponentRate},
      {"restarts separate switching from fixed opponents", NonStationarySeparation},
      {"LP solver agrees with independent oracles", LpOracles},
      {"bandit pseudo-regret is sublinear", BanditRate},
      {"simulate is byte-for-byte deterministic", [&] { return Determinism(cli); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::printf("criterion %d: %s  %s  [%s] (%.1fs)\n", id, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
