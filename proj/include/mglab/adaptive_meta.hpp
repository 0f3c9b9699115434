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

// Adaptive epoch V-learning: restarts the base learner in blocks b = 1, 2, ...
// of 2^{2b} + 1 sub-blocks. Each sub-block runs a fresh base instance and
// ends as soon as the computable regret proxy
//   Phi = sum_{k in T} (V^k_1(s^k_1) - sum_h r^k_h) + sqrt(iota |T|)
// exceeds the threshold D of its sub-block.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mglab/epoch_vlearning.hpp"
#include "mglab/errors.hpp"
#include "mglab/game.hpp"

namespace mglab {

enum class ScheduleMode { kOblivious, kAdaptive };

inline std::string ToString(ScheduleMode m) {
  return m == ScheduleMode::kOblivious ? "oblivious" : "adaptive";
}

// Sub-blocks per block: 2^{2b} + 1.
inline std::int64_t SubBlocksInBlock(int block) {
  Require(block >= 1 && block <= 30, "block index out of range");
  return (std::int64_t{1} << (2 * block)) + 1;
}

// Epoch incremental factor for sub-block `ell` of block `block`.
//   oblivious: 1/H for ell <= 4^b, else max{4^{-b}/H, |S|/K}
//   adaptive:  1/(H sqrt|S|) for ell <= 4^b, else max{4^{-b}/(H sqrt|S|), |S|/K}
inline double EtaSchedule(ScheduleMode mode, int block, std::int64_t ell, int horizon,
                          int total_states, std::int64_t episodes) {
  const std::int64_t last = SubBlocksInBlock(block);
  Require(ell >= 1 && ell <= last, "EtaSchedule: sub-block index out of range");
  double base = 1.0 / horizon;
  if (mode == ScheduleMode::kAdaptive) base /= std::sqrt(static_cast<double>(total_states));
  if (ell < last) return base;
  return std::max(std::ldexp(base, -2 * block),
                  static_cast<double>(total_states) / static_cast<double>(episodes));
}

struct MetaConfig {
  std::int64_t episodes = 1;
  double delta = 0.05;
  double c0 = 2.0;
  ScheduleMode mode = ScheduleMode::kOblivious;
  double iota_scale = 1.0;
  double bandit_constant = 2.0;
  bool bandit_doubling = false;

  void Validate() const {
    Require(episodes >= 1, "K must be >= 1");
    Require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    Require(c0 >= 2.0, "c0 must be >= 2");
    Require(iota_scale > 0.0, "iota_scale must be positive");
  }
};

enum class MetaOutcome { kContinueSubBlock, kAdvanceSubBlock, kAdvanceBlock };

struct SubBlockStart {
  std::int64_t episode;  // first global episode of the instance (1-based)
  int block;
  std::int64_t sub_block;
  double eta;
  double iota;
  double delta;  // confidence handed to the base instance
  friend bool operator==(const SubBlockStart&, const SubBlockStart&) = default;
};

class AdaptiveEpochVLearning {
 public:
  AdaptiveEpochVLearning(GameDims dims, MetaConfig cfg) : dims_(std::move(dims)), cfg_(cfg) {
    dims_.Validate();
    cfg_.Validate();
    StartInstance(1);
  }

  const MetaConfig& config() const { return cfg_; }
  EpochVLearner& learner() { return *learner_; }
  const EpochVLearner& learner() const { return *learner_; }

  int block() const { return block_; }
  std::int64_t sub_block() const { return sub_block_; }
  std::int64_t sub_block_episodes() const { return sub_block_episodes_; }
  double phi() const { return phi_; }
  double threshold() const { return threshold_; }
  double reward_deficit_sum() const { return deficit_sum_; }
  double iota() const { return learner_->iota(); }
  double eta() const { return learner_->eta(); }
  const std::vector<SubBlockStart>& instances() const { return instances_; }

  // Confidence passed to every base instance: delta / (2 K^6).
  double BaseDelta() const {
    return cfg_.delta / (2.0 * std::pow(static_cast<double>(cfg_.episodes), 6));
  }

  // Records the outcome of the episode the current instance just played.
  // `next_episode` stamps the start of a replacement instance.
  MetaOutcome Step(double v1_optimistic, double total_reward, std::int64_t next_episode) {
    ++sub_block_episodes_;
    deficit_sum_ += v1_optimistic - total_reward;
    const double iota = learner_->iota();
    const double t = static_cast<double>(sub_block_episodes_);
    phi_ = deficit_sum_ + std::sqrt(iota * t);
    const double log_k = std::log(static_cast<double>(cfg_.episodes));
    const double scale = cfg_.c0 * dims_.horizon;
    const double s_total = dims_.TotalStates();
    const double eta = learner_->eta();
    if (sub_block_ < SubBlocksInBlock(block_)) {
      threshold_ = 3.0 * scale * std::sqrt(iota * s_total * t * log_k / eta);
    } else {
      threshold_ = 4.0 * scale *
                   std::sqrt(iota * s_total * static_cast<double>(cfg_.episodes) * log_k / eta);
    }
    if (phi_ <= threshold_) return MetaOutcome::kContinueSubBlock;

    MetaOutcome outcome = MetaOutcome::kAdvanceSubBlock;
    if (sub_block_ == SubBlocksInBlock(block_)) {
      ++block_;
      sub_block_ = 1;
      outcome = MetaOutcome::kAdvanceBlock;
    } else {
      ++sub_block_;
    }
    StartInstance(next_episode);
    return outcome;
  }

 private:
  void StartInstance(std::int64_t first_episode) {
    LearnerConfig lc;
    lc.episodes = cfg_.episodes;
    lc.delta = BaseDelta();
    lc.eta = EtaSchedule(cfg_.mode, block_, sub_block_, dims_.horizon, dims_.TotalStates(),
                         cfg_.episodes);
    lc.iota_scale = cfg_.iota_scale;
    lc.bandit_constant = cfg_.bandit_constant;
    lc.bandit_doubling = cfg_.bandit_doubling;
    learner_.emplace(dims_, lc);
    phi_ = 0.0;
    threshold_ = 0.0;
    deficit_sum_ = 0.0;
    sub_block_episodes_ = 0;
    instances_.push_back({first_episode, block_, sub_block_, lc.eta, learner_->iota(), lc.delta});
  }

  GameDims dims_;
  MetaConfig cfg_;
  int block_ = 1;
  std::int64_t sub_block_ = 1;
  std::int64_t sub_block_episodes_ = 0;
  double phi_ = 0.0;
  double threshold_ = 0.0;
  double deficit_sum_ = 0.0;
  std::optional<EpochVLearner> learner_;
  std::vector<SubBlockStart> instances_;
};

}  // namespace mglab
