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

// Experiment configuration, seeded multi-run execution, and summary CSVs.
//
// Config files are flat `key = value` lines with dotted namespaces; '#'
// starts a comment. See README.md for the full key list.
//
// Run seeding: run i with seed value s uses the generator
//   mt19937_64(SplitMix64(SplitMix64(seed.master) + s)),
// so a run depends only on (master seed, its own seed value) and never on
// how many runs share the invocation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mglab/adaptive_meta.hpp"
#include "mglab/epoch_vlearning.hpp"
#include "mglab/errors.hpp"
#include "mglab/game.hpp"
#include "mglab/game_io.hpp"
#include "mglab/opponents.hpp"
#include "mglab/regret_eval.hpp"
#include "mglab/runlog_io.hpp"
#include "mglab/simulation.hpp"

namespace mglab {

// Ordered key/value pairs with the line each key came from.
class ConfigMap {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigMap Parse(std::istream& in, const std::string& source) {
    ConfigMap m;
    m.source_ = source;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string line = detail::StripComment(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
      std::string key = detail::StripComment(line.substr(0, eq));
      std::string value = detail::StripComment(line.substr(eq + 1));
      if (key.empty()) throw ParseError(source, line_no, "empty key");
      if (m.entries_.count(key)) throw ParseError(source, line_no, "duplicate key '" + key + "'");
      m.order_.push_back(key);
      m.entries_[key] = {value, line_no};
    }
    return m;
  }

  static ConfigMap FromString(const std::string& text, const std::string& source = "<config>") {
    std::istringstream in(text);
    return Parse(in, source);
  }

  void Set(const std::string& key, const std::string& value) {
    if (!entries_.count(key)) order_.push_back(key);
    entries_[key] = {value, 0};
  }

  bool Has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string Str(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    used_.insert(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  double Real(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    used_.insert(key);
    if (it == entries_.end()) return fallback;
    return ParseReal(key, it->second);
  }

  std::int64_t Int(const std::string& key, std::int64_t fallback) const {
    auto it = entries_.find(key);
    used_.insert(key);
    if (it == entries_.end()) return fallback;
    return ParseInt(key, it->second.value, it->second.line);
  }

  bool Bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    used_.insert(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(key, "expected true/false, got '" + v + "'");
  }

  // Comma-separated integers; `a..b` expands to the inclusive range.
  std::vector<std::int64_t> IntList(const std::string& key) const {
    auto it = entries_.find(key);
    used_.insert(key);
    std::vector<std::int64_t> out;
    if (it == entries_.end()) return out;
    std::stringstream ss(it->second.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::StripComment(item);
      const auto dots = item.find("..");
      if (dots != std::string::npos) {
        const auto lo = ParseInt(key, item.substr(0, dots), it->second.line);
        const auto hi = ParseInt(key, item.substr(dots + 2), it->second.line);
        if (hi < lo || hi - lo > 1000000) throw Error(key, "bad range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(ParseInt(key, item, it->second.line));
      }
    }
    return out;
  }

  ParseError Error(const std::string& key, const std::string& what) const {
    auto it = entries_.find(key);
    return ParseError(source_, it == entries_.end() ? 0 : it->second.line, key + ": " + what);
  }

  // Keys never read by the loader; reported as errors to catch typos.
  std::vector<std::string> Unused() const {
    std::vector<std::string> out;
    for (const auto& k : order_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

  std::vector<std::pair<std::string, std::string>> Items() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : order_) out.emplace_back(k, entries_.at(k).value);
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  double ParseReal(const std::string& key, const Entry& e) const {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (e.value.empty() || *end != '\0') throw Error(key, "expected a number, got '" + e.value + "'");
    return v;
  }
  std::int64_t ParseInt(const std::string& key, const std::string& text, int) const {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0') throw Error(key, "expected an integer, got '" + text + "'");
    return v;
  }

  std::string source_;
  std::vector<std::string> order_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

enum class PolicyPoolKind { kRandom, kPure, kUniform };

struct ExperimentConfig {
  // game
  std::string game_file;  // empty: random game
  GameDims dims = GameDims::Uniform(3, 2, 2, 2);
  std::uint64_t game_seed = 1;
  // algorithm and learner
  Algorithm algorithm = Algorithm::kEpochV;
  std::int64_t K = 1024;
  std::vector<std::int64_t> checkpoints;  // ascending, last == K
  double delta = 0.05;
  std::optional<double> eta;  // empty: 1/H
  double iota_scale = 1.0;
  std::int64_t iota_budget = 0;  // K used for iota in epoch_v runs
  double bandit_constant = 2.0;
  bool bandit_doubling = false;
  ScheduleMode schedule_mode = ScheduleMode::kOblivious;
  double c0 = 2.0;
  // opponent
  OpponentKind opponent = OpponentKind::kFixed;
  PolicyPoolKind pool_kind = PolicyPoolKind::kRandom;
  int pool_size = 2;
  std::uint64_t opponent_seed = 11;
  std::vector<std::int64_t> switch_at;
  // initial states
  InitialStates init;
  // seeds
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds{0};
  // echo of the source config
  std::vector<std::pair<std::string, std::string>> echo;

  double Eta() const { return eta.value_or(1.0 / dims.horizon); }
};

inline ExperimentConfig LoadExperimentConfig(const ConfigMap& m) {
  ExperimentConfig c;
  const std::string source = m.Str("game.source", "random");
  if (source == "file") {
    c.game_file = m.Str("game.file", "");
    if (c.game_file.empty()) throw m.Error("game.file", "required when game.source = file");
  } else if (source != "random") {
    throw m.Error("game.source", "expected random or file");
  }
  const auto H = m.Int("game.horizon", 3);
  if (H < 1 || H > 1000) throw m.Error("game.horizon", "must be in [1, 1000]");
  auto per_step = [&](const std::string& key, std::int64_t fallback) {
    auto v = m.IntList(key);
    if (v.empty()) v.assign(H, fallback);
    if (v.size() == 1) v.assign(H, v[0]);
    if (static_cast<std::int64_t>(v.size()) != H) throw m.Error(key, "needs 1 or H entries");
    std::vector<int> out;
    for (auto x : v) {
      if (x < 1) throw m.Error(key, "dimensions must be >= 1");
      out.push_back(static_cast<int>(x));
    }
    return out;
  };
  c.dims.horizon = static_cast<int>(H);
  c.dims.states = per_step("game.states", 2);
  c.dims.states.push_back(1);
  c.dims.actions_a = per_step("game.actions_a", 2);
  c.dims.actions_b = per_step("game.actions_b", 2);
  c.game_seed = static_cast<std::uint64_t>(m.Int("game.seed", 1));

  const std::string alg = m.Str("algorithm", "epoch_v");
  if (alg == "epoch_v") c.algorithm = Algorithm::kEpochV;
  else if (alg == "adaptive_meta") c.algorithm = Algorithm::kAdaptiveMeta;
  else throw m.Error("algorithm", "expected epoch_v or adaptive_meta");

  c.K = m.Int("learner.K", 1024);
  if (c.K < 1) throw m.Error("learner.K", "must be >= 1");
  c.checkpoints = m.IntList("learner.checkpoints");
  if (c.checkpoints.empty()) c.checkpoints.push_back(c.K);
  std::sort(c.checkpoints.begin(), c.checkpoints.end());
  c.checkpoints.erase(std::unique(c.checkpoints.begin(), c.checkpoints.end()), c.checkpoints.end());
  if (c.checkpoints.front() < 1 || c.checkpoints.back() > c.K)
    throw m.Error("learner.checkpoints", "checkpoints must lie in [1, K]");
  c.delta = m.Real("learner.delta", 0.05);
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw m.Error("learner.delta", "must lie in (0,1)");
  if (m.Has("learner.eta")) {
    const std::string e = m.Str("learner.eta", "");
    if (e == "1/H") {
      c.eta = 1.0 / c.dims.horizon;
    } else {
      c.eta = m.Real("learner.eta", 0.0);
      if (!(*c.eta > 0.0 && *c.eta <= 1.0)) throw m.Error("learner.eta", "must lie in (0,1]");
    }
  }
  c.iota_scale = m.Real("learner.iota_scale", 1.0);
  if (!(c.iota_scale > 0.0)) throw m.Error("learner.iota_scale", "must be positive");
  c.iota_budget = m.Int("learner.iota_budget", c.K);
  if (c.iota_budget < c.K) throw m.Error("learner.iota_budget", "must be >= learner.K");
  c.bandit_constant = m.Real("learner.bandit_constant", 2.0);
  if (!(c.bandit_constant > 0.0)) throw m.Error("learner.bandit_constant", "must be positive");
  c.bandit_doubling = m.Bool("bandit.doubling", false);
  const std::string mode = m.Str("learner.schedule_mode", "oblivious");
  if (mode == "oblivious") c.schedule_mode = ScheduleMode::kOblivious;
  else if (mode == "adaptive") c.schedule_mode = ScheduleMode::kAdaptive;
  else throw m.Error("learner.schedule_mode", "expected oblivious or adaptive");
  c.c0 = m.Real("learner.c0", 2.0);
  if (!(c.c0 >= 2.0)) throw m.Error("learner.c0", "must be >= 2");

  try {
    c.opponent = ParseOpponentKind(m.Str("opponent.kind", "fixed"));
  } catch (const PreconditionError& e) {
    throw m.Error("opponent.kind", e.what());
  }
  const std::string pool = m.Str("opponent.policies", "random");
  if (pool == "random") c.pool_kind = PolicyPoolKind::kRandom;
  else if (pool == "pure") c.pool_kind = PolicyPoolKind::kPure;
  else if (pool == "uniform") c.pool_kind = PolicyPoolKind::kUniform;
  else throw m.Error("opponent.policies", "expected random, pure or uniform");
  c.pool_size = static_cast<int>(m.Int("opponent.pool_size", 2));
  if (c.pool_size < 1) throw m.Error("opponent.pool_size", "must be >= 1");
  if (c.opponent == OpponentKind::kDrifting && c.pool_size < 2)
    throw m.Error("opponent.pool_size", "drifting needs 2 policies");
  c.opponent_seed = static_cast<std::uint64_t>(m.Int("opponent.seed", 11));
  for (auto x : m.IntList("opponent.switch_at")) c.switch_at.push_back(x);
  for (std::size_t i = 0; i < c.switch_at.size(); ++i) {
    if (c.switch_at[i] < 1 || c.switch_at[i] > c.K)
      throw m.Error("opponent.switch_at", "switch episodes must lie in [1, K]");
    if (i && c.switch_at[i] <= c.switch_at[i - 1])
      throw m.Error("opponent.switch_at", "switch episodes must be strictly increasing");
  }
  const auto period = m.Int("opponent.switch_period", 0);
  if (period < 0) throw m.Error("opponent.switch_period", "must be >= 0");
  if (period > 0) {
    if (!c.switch_at.empty()) throw m.Error("opponent.switch_period", "conflicts with opponent.switch_at");
    for (std::int64_t k = period + 1; k <= c.K; k += period) c.switch_at.push_back(k);
  }

  const std::string init = m.Str("init.schedule", "fixed");
  if (init == "fixed") c.init.schedule = InitSchedule::kFixed;
  else if (init == "round_robin") c.init.schedule = InitSchedule::kRoundRobin;
  else if (init == "random") c.init.schedule = InitSchedule::kRandom;
  else throw m.Error("init.schedule", "expected fixed, round_robin or random");
  c.init.state = static_cast<int>(m.Int("init.state", 0));
  if (c.init.state < 0 || c.init.state >= c.dims.states[0])
    throw m.Error("init.state", "outside the step-1 state set");
  c.init.seed = static_cast<std::uint64_t>(m.Int("init.seed", 0));

  c.master_seed = static_cast<std::uint64_t>(m.Int("seed.master", 0));
  const auto seeds = m.IntList("seeds");
  if (!seeds.empty()) {
    c.seeds.clear();
    for (auto s : seeds) {
      if (s < 0) throw m.Error("seeds", "seeds must be non-negative");
      c.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  const auto unused = m.Unused();
  if (!unused.empty()) throw m.Error(unused.front(), "unknown or unused key");
  c.echo = m.Items();
  return c;
}

inline MarkovGame BuildGame(const ExperimentConfig& c) {
  if (c.game_file.empty()) return RandomGame(c.dims, c.game_seed);
  std::ifstream in(c.game_file);
  if (!in) throw PreconditionError("cannot open game file '" + c.game_file + "'");
  return ReadGame(in, c.game_file);
}

inline OpponentSpec BuildOpponentSpec(const ExperimentConfig& c, const MarkovGame& game) {
  OpponentSpec spec;
  spec.kind = c.opponent;
  spec.episodes = c.K;
  spec.seed = c.opponent_seed;
  spec.switch_at = c.switch_at;
  Rng rng(SplitMix64(c.opponent_seed));
  for (int i = 0; i < c.pool_size; ++i) {
    switch (c.pool_kind) {
      case PolicyPoolKind::kRandom: spec.pool.push_back(RandomPolicy<Side::kMin>(game, rng)); break;
      case PolicyPoolKind::kPure: spec.pool.push_back(RandomPurePolicy<Side::kMin>(game, rng)); break;
      case PolicyPoolKind::kUniform: spec.pool.push_back(MinPolicy::Uniform(game)); break;
    }
  }
  return spec;
}

inline std::uint64_t RunGeneratorSeed(std::uint64_t master, std::uint64_t seed) {
  return SplitMix64(SplitMix64(master) + seed);
}

inline SimulationConfig BuildSimulationConfig(const ExperimentConfig& c, const MarkovGame& game,
                                              std::uint64_t seed) {
  SimulationConfig s;
  s.algorithm = c.algorithm;
  s.init = c.init;
  s.seed = RunGeneratorSeed(c.master_seed, seed);
  s.learner.episodes = c.K;
  s.learner.delta = c.delta;
  s.learner.eta = c.Eta();
  s.learner.iota_scale = c.iota_scale;
  s.learner.bandit_constant = c.bandit_constant;
  s.learner.bandit_doubling = c.bandit_doubling;
  LearnerConfig pinned = s.learner;
  pinned.episodes = std::max(c.iota_budget, c.K);
  s.iota = ComputeIota(pinned, game.dims());
  s.meta.episodes = c.K;
  s.meta.delta = c.delta;
  s.meta.c0 = c.c0;
  s.meta.mode = c.schedule_mode;
  s.meta.iota_scale = c.iota_scale;
  s.meta.bandit_constant = c.bandit_constant;
  s.meta.bandit_doubling = c.bandit_doubling;
  return s;
}

inline RunLog RunSeed(const ExperimentConfig& c, const MarkovGame& game, std::uint64_t seed) {
  Opponent opponent(game, BuildOpponentSpec(c, game));
  RunLog log = Simulate(game, BuildSimulationConfig(c, game, seed), opponent);
  log.seed = seed;
  log.config = c.echo;
  return log;
}

// ---------------------------------------------------------------------------
// Summary CSV

inline constexpr const char* kCsvHeader =
    "seed,K,algorithm,opponent.kind,eta,iota,iota_scale,ENR,NR,ExtR_or_NA,C,L,optimistic_gap,"
    "optimism_violations,max_epoch_count,restarts,wall_ms";

struct SummaryRow {
  std::uint64_t seed = 0;
  std::int64_t K = 0;
  std::string algorithm;
  std::string opponent_kind;
  double eta = 0.0;
  double iota = 0.0;
  double iota_scale = 0.0;
  double enr = 0.0;
  double nr = 0.0;
  std::optional<double> extr;
  double c = 0.0;
  std::int64_t l = 0;
  double optimistic_gap = 0.0;
  std::int64_t optimism_violations = 0;
  std::int64_t max_epoch_count = 0;
  std::int64_t restarts = 0;
  std::optional<double> wall_ms;
};

inline void WriteCsvRow(std::ostream& out, const SummaryRow& r) {
  out << r.seed << ',' << r.K << ',' << r.algorithm << ',' << r.opponent_kind << ','
      << FormatDouble(r.eta) << ',' << FormatDouble(r.iota) << ',' << FormatDouble(r.iota_scale)
      << ',' << FormatDouble(r.enr) << ',' << FormatDouble(r.nr) << ','
      << (r.extr ? FormatDouble(*r.extr) : std::string("NA")) << ',' << FormatDouble(r.c) << ','
      << r.l << ',' << FormatDouble(r.optimistic_gap) << ',' << r.optimism_violations << ','
      << r.max_epoch_count << ',' << r.restarts << ','
      << (r.wall_ms ? FormatDouble(*r.wall_ms) : std::string("NA")) << '\n';
}

inline void WriteCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) WriteCsvRow(out, r);
}

inline SummaryRow MakeRow(const RunLog& log, const RegretEvaluator& eval, std::int64_t prefix) {
  const RegretReport rep = eval.Report(prefix);
  const SubBlockStart& inst = log.InstanceAt(prefix);
  SummaryRow r;
  r.seed = log.seed;
  r.K = prefix;
  r.algorithm = ToString(log.algorithm);
  r.opponent_kind = log.opponent_kind;
  r.eta = inst.eta;
  r.iota = inst.iota;
  r.iota_scale = log.iota_scale;
  r.enr = rep.enr;
  r.nr = rep.nr;
  r.extr = rep.extr;
  r.c = rep.c;
  r.l = rep.l;
  r.optimistic_gap = rep.optimistic_gap;
  r.optimism_violations = rep.optimism_violations;
  r.max_epoch_count = rep.max_epoch_count;
  r.restarts = rep.restarts;
  return r;
}

inline std::vector<SummaryRow> SummarizeRun(const RunLog& log,
                                            const std::vector<std::int64_t>& checkpoints) {
  RegretEvaluator eval(log);
  std::vector<SummaryRow> rows;
  for (auto k : checkpoints)
    if (k <= log.K()) rows.push_back(MakeRow(log, eval, k));
  return rows;
}

// ---------------------------------------------------------------------------
// Parallel execution

inline int WorkerCount(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MG_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

// Runs fn(i) for i in [0, jobs) on up to WorkerCount workers. The first
// exception is rethrown after all workers stop.
template <class Fn>
void ParallelFor(std::size_t jobs, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = jobs;
      }
    }
  };
  const int n = WorkerCount(jobs);
  std::vector<std::thread> threads;
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

struct ExperimentOptions {
  bool force = false;
  bool timing = false;
};

inline std::string RunLogFileName(std::size_t index, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "run_%04zu_seed_%llu.log", index,
                static_cast<unsigned long long>(seed));
  return buf;
}

// Simulates every seed, writes one RunLog per seed plus summary.csv into
// out_dir, and returns the summary rows in seed order.
inline std::vector<SummaryRow> RunExperiment(const ExperimentConfig& c,
                                             const std::filesystem::path& out_dir,
                                             const ExperimentOptions& opt = {}) {
  namespace fs = std::filesystem;
  if (fs::exists(out_dir)) {
    bool occupied = fs::exists(out_dir / "summary.csv");
    for (const auto& e : fs::directory_iterator(out_dir))
      occupied |= e.path().filename().string().rfind("run_", 0) == 0;
    if (occupied && !opt.force)
      throw PreconditionError("output directory '" + out_dir.string() +
                              "' already holds results; pass --force to overwrite");
    if (occupied) {
      for (const auto& e : fs::directory_iterator(out_dir))
        if (e.path().filename().string().rfind("run_", 0) == 0) fs::remove(e.path());
    }
  }
  fs::create_directories(out_dir);
  const MarkovGame game = BuildGame(c);
  {
    std::ofstream g(out_dir / "game.txt", std::ios::binary);
    WriteGame(g, game);
  }
  std::vector<std::vector<SummaryRow>> per_run(c.seeds.size());
  ParallelFor(c.seeds.size(), [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const RunLog log = RunSeed(c, game, c.seeds[i]);
    {
      std::ofstream f(out_dir / RunLogFileName(i, c.seeds[i]), std::ios::binary);
      WriteRunLog(f, log);
      if (!f) throw std::runtime_error("failed writing run log");
    }
    per_run[i] = SummarizeRun(log, c.checkpoints);
    if (opt.timing) {
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : per_run[i]) r.wall_ms = ms;
    }
  });
  std::vector<SummaryRow> rows;
  for (auto& v : per_run) rows.insert(rows.end(), v.begin(), v.end());
  std::ofstream csv(out_dir / "summary.csv", std::ios::binary);
  WriteCsv(csv, rows);
  if (!csv) throw std::runtime_error("failed writing summary.csv");
  return rows;
}

inline RunLog LoadRunLog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptLogError("cannot open run log '" + path.string() + "'");
  return ReadRunLog(in, path.string());
}

// One report row per RunLog in run_dir, at each run's full K.
inline std::vector<SummaryRow> EvaluateRunDir(const std::filesystem::path& run_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(run_dir)) throw PreconditionError("'" + run_dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(run_dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("run_", 0) == 0 && e.path().extension() == ".log") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw PreconditionError("no run logs in '" + run_dir.string() + "'");
  std::vector<SummaryRow> rows(files.size());
  ParallelFor(files.size(), [&](std::size_t i) {
    const RunLog log = LoadRunLog(files[i]);
    RegretEvaluator eval(log);
    rows[i] = MakeRow(log, eval, log.K());
  });
  return rows;
}

}  // namespace mglab
