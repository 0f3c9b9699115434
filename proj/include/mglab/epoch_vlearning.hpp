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

// Epoch V-learning for the max-player of a layered Markov game.
//
// Every (h, s) keeps geometric epochs: epoch tau ends on the visit where its
// count reaches ceil((1 + eta) N_{tau-1}). At that point the optimistic value
// becomes min{H - h + 1, epoch average of (r + V_{h+1}(s')) + sqrt(iota / N)},
// the cell's bandit restarts, and its policy returns to uniform. Visits that
// do not end an epoch feed the bandit (r + V_{h+1}(s')) / H.
//
// The learner sees only its own actions, rewards and states.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mglab/adv_bandit.hpp"
#include "mglab/errors.hpp"
#include "mglab/game.hpp"

namespace mglab {

struct LearnerConfig {
  std::int64_t episodes = 1;  // K, the episode budget
  double delta = 0.05;
  double eta = 1.0;           // epoch incremental factor
  double iota_scale = 1.0;
  double bandit_constant = 2.0;  // c in iota
  bool bandit_doubling = false;

  void Validate() const {
    Require(episodes >= 1, "K must be >= 1");
    Require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    Require(eta > 0.0 && eta <= 1.0, "eta must lie in (0,1]");
    Require(iota_scale > 0.0, "iota_scale must be positive");
    Require(bandit_constant > 0.0, "bandit constant must be positive");
  }
};

// ceil((1 + eta) ln K / eta): cap on the number of epochs of any (h, s).
inline std::int64_t EpochCountBound(std::int64_t episodes, double eta) {
  Require(episodes >= 1 && eta > 0.0, "EpochCountBound: bad arguments");
  return static_cast<std::int64_t>(
      std::ceil((1.0 + eta) * std::log(static_cast<double>(episodes)) / eta - 1e-9));
}

// iota = scale * max{4c^2, 8} * H^2 * |A| * ln(8 H K M |A| |S| / delta)
// with M the epoch-count bound (at least 1, so K = 1 stays finite).
inline double ComputeIota(const LearnerConfig& cfg, const GameDims& dims) {
  Require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must lie in (0,1)");
  Require(cfg.episodes >= 1 && cfg.eta > 0.0, "ComputeIota: bad K or eta");
  const double c = cfg.bandit_constant;
  const double lead = std::max(4.0 * c * c, 8.0);
  const double H = dims.horizon;
  const double A = dims.MaxActionsA();
  const double S = dims.TotalStates();
  const double K = static_cast<double>(cfg.episodes);
  const double M = static_cast<double>(std::max<std::int64_t>(1, EpochCountBound(cfg.episodes, cfg.eta)));
  return cfg.iota_scale * lead * H * H * A * std::log(8.0 * H * K * M * A * S / cfg.delta);
}

inline double Bonus(double iota, std::int64_t n) {
  Require(n >= 1, "Bonus: n must be >= 1");
  return std::sqrt(iota / static_cast<double>(n));
}

struct ValueChange {
  std::int64_t episode;  // first episode that uses the new value
  int h;
  int s;
  double value;
  friend bool operator==(const ValueChange&, const ValueChange&) = default;
};

enum class RecordOutcome { kContinued, kEpochRolled };

class EpochVLearner {
 public:
  struct Cell {
    std::int64_t epoch = 1;       // tau
    std::int64_t prev_count = 1;  // N_{tau-1}
    std::int64_t count = 0;       // N_tau
    std::int64_t threshold = 0;   // ceil((1 + eta) N_{tau-1})
    double epoch_sum = 0.0;
    double value = 0.0;
    TsallisIxBandit bandit{1};
    std::vector<double> policy;
  };

  // `iota` overrides ComputeIota when positive.
  EpochVLearner(GameDims dims, LearnerConfig cfg, double iota = 0.0)
      : dims_(std::move(dims)), cfg_(cfg) {
    dims_.Validate();
    cfg_.Validate();
    iota_ = iota > 0.0 ? iota : ComputeIota(cfg_, dims_);
    cells_.resize(dims_.horizon);
    for (int h = 0; h < dims_.horizon; ++h) {
      const int n = dims_.actions_a[h];
      cells_[h].resize(dims_.states[h]);
      for (auto& c : cells_[h]) {
        c.value = dims_.horizon - h;
        c.threshold = NextThreshold(c.prev_count);
        c.bandit = TsallisIxBandit(n, cfg_.bandit_doubling);
        c.policy.assign(n, 1.0 / n);
      }
    }
  }

  const GameDims& dims() const { return dims_; }
  const LearnerConfig& config() const { return cfg_; }
  double iota() const { return iota_; }
  double eta() const { return cfg_.eta; }
  const Cell& cell(int h, int s) const { return cells_.at(h).at(s); }

  // Sets the episode index used to stamp value changes.
  void BeginEpisode(std::int64_t k) { episode_ = k; }

  std::span<const double> Act(int h, int s) const { return cells_.at(h).at(s).policy; }

  // Stored V_h(s); zero on the terminal layer.
  double Value(int h, int s) const { return h >= dims_.horizon ? 0.0 : cells_.at(h).at(s).value; }

  double OptimisticV1(int s1) const { return Value(0, s1); }

  RecordOutcome Record(int h, int s, int a, double reward, int s_next) {
    if (h < 0 || h >= dims_.horizon || s < 0 || s >= dims_.states[h])
      throw IndexError("Record: (h, s) out of range");
    if (s_next < 0 || s_next >= dims_.states[h + 1]) throw IndexError("Record: next state out of range");
    if (!(reward >= 0.0 && reward <= 1.0)) throw PreconditionError("Record: reward outside [0,1]");
    Cell& c = cells_[h][s];
    // V_{h+1} has not been touched yet this episode, so this is V^k_{h+1}.
    const double target = reward + Value(h + 1, s_next);
    ++c.count;
    c.epoch_sum += target;
    if (c.count == c.threshold) {
      const double cap = dims_.horizon - h;
      c.value = std::min(cap, c.epoch_sum / static_cast<double>(c.count) + Bonus(iota_, c.count));
      changes_.push_back({episode_ + 1, h, s, c.value});
      ++c.epoch;
      c.prev_count = c.count;
      c.count = 0;
      c.threshold = NextThreshold(c.prev_count);
      c.epoch_sum = 0.0;
      c.bandit.Reset();
      std::fill(c.policy.begin(), c.policy.end(), 1.0 / c.policy.size());
      return RecordOutcome::kEpochRolled;
    }
    const double feed = target / dims_.horizon;
    if (!(feed >= 0.0 && feed <= 1.0 + 1e-12))
      throw InvariantViolation("normalized bandit feed " + std::to_string(feed) + " outside [0,1]");
    const auto p = c.bandit.Update(a, std::min(feed, 1.0));
    c.policy.assign(p.begin(), p.end());
    return RecordOutcome::kContinued;
  }

  MaxPolicy SnapshotPolicy() const {
    MaxPolicy::Table t(dims_.horizon);
    for (int h = 0; h < dims_.horizon; ++h)
      for (const auto& c : cells_[h]) t[h].push_back(c.policy);
    return MaxPolicy(std::move(t));
  }

  std::int64_t MaxEpochCount() const {
    std::int64_t m = 0;
    for (const auto& layer : cells_)
      for (const auto& c : layer) m = std::max(m, c.epoch);
    return m;
  }

  const std::vector<ValueChange>& value_changes() const { return changes_; }

 private:
  std::int64_t NextThreshold(std::int64_t prev) const {
    // The 1e-9 guard keeps exact products such as (1 + 1/3) * 3 from rounding up.
    return static_cast<std::int64_t>(std::ceil((1.0 + cfg_.eta) * static_cast<double>(prev) - 1e-9));
  }

  GameDims dims_;
  LearnerConfig cfg_;
  double iota_ = 0.0;
  std::int64_t episode_ = 0;
  std::vector<std::vector<Cell>> cells_;
  std::vector<ValueChange> changes_;
};

}  // namespace mglab
