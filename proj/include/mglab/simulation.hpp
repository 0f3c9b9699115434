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

// Episode loop for both learners and the evaluation-only run record.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mglab/adaptive_meta.hpp"
#include "mglab/epoch_vlearning.hpp"
#include "mglab/errors.hpp"
#include "mglab/game.hpp"
#include "mglab/opponents.hpp"

namespace mglab {

enum class InitSchedule { kFixed, kRoundRobin, kRandom };

struct InitialStates {
  InitSchedule schedule = InitSchedule::kFixed;
  int state = 0;           // kFixed
  std::uint64_t seed = 0;  // kRandom

  int For(std::int64_t k, int num_states) const {
    switch (schedule) {
      case InitSchedule::kFixed: return state;
      case InitSchedule::kRoundRobin: return static_cast<int>((k - 1) % num_states);
      case InitSchedule::kRandom:
        return static_cast<int>(SplitMix64(seed + static_cast<std::uint64_t>(k)) %
                                static_cast<std::uint64_t>(num_states));
    }
    return 0;
  }
};

enum class Algorithm { kEpochV, kAdaptiveMeta };

inline std::string ToString(Algorithm a) {
  return a == Algorithm::kEpochV ? "epoch_v" : "adaptive_meta";
}

struct EpisodeRecord {
  int s1 = 0;
  Trajectory trajectory;
  double v1_optimistic = 0.0;  // V^k_1(s^k_1) before the episode's updates
  int block = 1;
  std::int64_t sub_block = 1;
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

// Omniscient record of one run. Only evaluation code reads the opponent's
// policies; the learner never sees them.
struct RunLog {
  MarkovGame game;
  Algorithm algorithm = Algorithm::kEpochV;
  std::string opponent_kind;
  std::uint64_t seed = 0;
  double iota_scale = 1.0;
  std::vector<std::pair<std::string, std::string>> config;  // echo
  std::vector<EpisodeRecord> episodes;
  std::vector<MaxPolicy> learner_policies;
  std::vector<MinPolicy> opponent_policies;
  std::vector<ValueChange> value_changes;
  // Base-instance starts. epoch_v runs have exactly one.
  std::vector<SubBlockStart> instances;
  // The final sub-block was cut off by the episode budget (adaptive_meta).
  bool last_sub_block_partial = false;

  std::int64_t K() const { return static_cast<std::int64_t>(episodes.size()); }
  std::int64_t Restarts(std::int64_t prefix) const {
    std::int64_t n = 0;
    for (const auto& inst : instances) n += inst.episode > 1 && inst.episode <= prefix;
    return n;
  }
  // Instance active during episode k.
  const SubBlockStart& InstanceAt(std::int64_t k) const {
    const SubBlockStart* cur = &instances.front();
    for (const auto& inst : instances) {
      if (inst.episode > k) break;
      cur = &inst;
    }
    return *cur;
  }
};

struct SimulationConfig {
  Algorithm algorithm = Algorithm::kEpochV;
  LearnerConfig learner;  // epoch_v; learner.episodes is K
  double iota = 0.0;      // epoch_v override (0 = compute from learner)
  MetaConfig meta;        // adaptive_meta; meta.episodes is K
  InitialStates init;
  std::uint64_t seed = 0;

  std::int64_t K() const {
    return algorithm == Algorithm::kEpochV ? learner.episodes : meta.episodes;
  }
};

namespace detail {

// Plays episode k with the learner's current policy and feeds it back.
inline EpisodeRecord PlayEpisode(const MarkovGame& game, EpochVLearner& learner,
                                 const Opponent& opponent, const InitialStates& init,
                                 std::int64_t k, Rng& rng, RunLog& log) {
  EpisodeRecord rec;
  rec.s1 = init.For(k, game.num_states(0));
  MaxPolicy mu = learner.SnapshotPolicy();
  MinPolicy nu = opponent.PolicyFor(k, opponent.NeedsLearnerPolicy() ? &mu : nullptr);
  rec.v1_optimistic = learner.OptimisticV1(rec.s1);
  learner.BeginEpisode(k);
  // Each (h, s) occurs at most once per episode, so acting from the snapshot
  // and updating afterwards matches interleaved play.
  rec.trajectory = SampleEpisode(game, mu, nu, rng, rec.s1);
  const auto& t = rec.trajectory;
  for (int h = 0; h < game.horizon(); ++h)
    learner.Record(h, t.states[h], t.actions_a[h], t.rewards[h], t.states[h + 1]);
  log.learner_policies.push_back(std::move(mu));
  log.opponent_policies.push_back(std::move(nu));
  return rec;
}

}  // namespace detail

inline RunLog Simulate(const MarkovGame& game, const SimulationConfig& cfg, const Opponent& opponent) {
  const std::int64_t K = cfg.K();
  Require(K >= 1, "Simulate: K must be >= 1");
  Require(opponent.spec().episodes >= K, "Simulate: opponent schedule shorter than K");
  RunLog log;
  log.game = game;
  log.algorithm = cfg.algorithm;
  log.opponent_kind = ToString(opponent.spec().kind);
  log.seed = cfg.seed;
  log.episodes.reserve(K);
  log.learner_policies.reserve(K);
  log.opponent_policies.reserve(K);
  Rng rng(cfg.seed);

  if (cfg.algorithm == Algorithm::kEpochV) {
    log.iota_scale = cfg.learner.iota_scale;
    EpochVLearner learner(game.dims(), cfg.learner, cfg.iota);
    log.instances.push_back({1, 1, 1, learner.eta(), learner.iota(), cfg.learner.delta});
    for (std::int64_t k = 1; k <= K; ++k)
      log.episodes.push_back(detail::PlayEpisode(game, learner, opponent, cfg.init, k, rng, log));
    log.value_changes = learner.value_changes();
    return log;
  }

  log.iota_scale = cfg.meta.iota_scale;
  AdaptiveEpochVLearning meta(game.dims(), cfg.meta);
  std::size_t seen_changes = 0;
  for (std::int64_t k = 1; k <= K; ++k) {
    const int block = meta.block();
    const std::int64_t sub_block = meta.sub_block();
    EpisodeRecord rec = detail::PlayEpisode(game, meta.learner(), opponent, cfg.init, k, rng, log);
    rec.block = block;
    rec.sub_block = sub_block;
    const auto& changes = meta.learner().value_changes();
    log.value_changes.insert(log.value_changes.end(), changes.begin() + seen_changes, changes.end());
    seen_changes = changes.size();
    log.episodes.push_back(std::move(rec));
    // No episode follows K, so the final sub-block always ends on the budget.
    if (k == K) break;
    const auto& last = log.episodes.back();
    if (meta.Step(last.v1_optimistic, last.trajectory.Return(), k + 1) !=
        MetaOutcome::kContinueSubBlock)
      seen_changes = 0;
  }
  log.instances = meta.instances();
  log.last_sub_block_partial = true;
  return log;
}

}  // namespace mglab
