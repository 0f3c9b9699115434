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

// Opponent policy generators. ν^k is a pure function of the spec, the episode
// index k (1-based) and, for the best-responding kind, the learner's committed
// policy for episode k.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mglab/errors.hpp"
#include "mglab/game.hpp"

namespace mglab {

enum class OpponentKind { kFixed, kSwitching, kDrifting, kRandomEachSwitch, kBestResponse };

inline std::string ToString(OpponentKind k) {
  switch (k) {
    case OpponentKind::kFixed: return "fixed";
    case OpponentKind::kSwitching: return "switching";
    case OpponentKind::kDrifting: return "drifting";
    case OpponentKind::kRandomEachSwitch: return "random_each_switch";
    case OpponentKind::kBestResponse: return "best_response";
  }
  return "?";
}

inline OpponentKind ParseOpponentKind(const std::string& s) {
  for (auto k : {OpponentKind::kFixed, OpponentKind::kSwitching, OpponentKind::kDrifting,
                 OpponentKind::kRandomEachSwitch, OpponentKind::kBestResponse})
    if (ToString(k) == s) return k;
  throw PreconditionError("unknown opponent kind '" + s + "'");
}

struct OpponentSpec {
  OpponentKind kind = OpponentKind::kFixed;
  // fixed: pool[0]; switching: pool[i mod |pool|] in segment i;
  // drifting: pool[0] -> pool[1].
  std::vector<MinPolicy> pool;
  // Episodes at which a new segment begins (strictly increasing, in [2, K]).
  std::vector<std::int64_t> switch_at;
  std::int64_t episodes = 1;
  std::uint64_t seed = 0;  // random_each_switch draws
};

class Opponent {
 public:
  Opponent(const MarkovGame& game, OpponentSpec spec) : game_(&game), spec_(std::move(spec)) {
    Require(spec_.episodes >= 1, "opponent: K must be >= 1");
    for (std::size_t i = 0; i < spec_.switch_at.size(); ++i) {
      Require(spec_.switch_at[i] >= 1 && spec_.switch_at[i] <= spec_.episodes,
              "opponent: switch episode outside [1, K]");
      Require(i == 0 || spec_.switch_at[i] > spec_.switch_at[i - 1],
              "opponent: switch episodes must be strictly increasing");
    }
    for (const auto& p : spec_.pool) ValidatePolicy(game, p);
    switch (spec_.kind) {
      case OpponentKind::kFixed:
      case OpponentKind::kSwitching:
        Require(!spec_.pool.empty(), "opponent: policy pool is empty");
        break;
      case OpponentKind::kDrifting:
        Require(spec_.pool.size() >= 2, "opponent: drifting needs start and end policies");
        break;
      default:
        break;
    }
  }

  const OpponentSpec& spec() const { return spec_; }
  bool NeedsLearnerPolicy() const { return spec_.kind == OpponentKind::kBestResponse; }

  // Index of the schedule segment containing episode k (0 before any switch).
  std::int64_t Segment(std::int64_t k) const {
    return std::upper_bound(spec_.switch_at.begin(), spec_.switch_at.end(), k) -
           spec_.switch_at.begin();
  }

  MinPolicy PolicyFor(std::int64_t k, const MaxPolicy* learner_policy = nullptr) const {
    Require(k >= 1 && k <= spec_.episodes, "opponent: episode index outside [1, K]");
    switch (spec_.kind) {
      case OpponentKind::kFixed:
        return spec_.pool[0];
      case OpponentKind::kSwitching:
        return spec_.pool[static_cast<std::size_t>(Segment(k)) % spec_.pool.size()];
      case OpponentKind::kDrifting: {
        const double w = spec_.episodes == 1 ? 0.0
                                             : static_cast<double>(k - 1) /
                                                   static_cast<double>(spec_.episodes - 1);
        if (w == 0.0) return spec_.pool[0];
        if (w == 1.0) return spec_.pool[1];
        MinPolicy out = spec_.pool[0];
        for (int h = 0; h < out.horizon(); ++h)
          for (int s = 0; s < out.num_states(h); ++s) {
            auto& p = out.mutable_at(h, s);
            const auto end = spec_.pool[1].at(h, s);
            for (std::size_t b = 0; b < p.size(); ++b) p[b] = (1.0 - w) * p[b] + w * end[b];
          }
        return out;
      }
      case OpponentKind::kRandomEachSwitch: {
        Rng rng(SplitMix64(spec_.seed ^ SplitMix64(static_cast<std::uint64_t>(Segment(k)))));
        return RandomPolicy<Side::kMin>(*game_, rng);
      }
      case OpponentKind::kBestResponse:
        Require(learner_policy != nullptr, "best_response opponent needs the learner's policy");
        return BestResponseMin(*game_, *learner_policy).policy;
    }
    throw InvariantViolation("unhandled opponent kind");
  }

 private:
  const MarkovGame* game_;
  OpponentSpec spec_;
};

}  // namespace mglab
