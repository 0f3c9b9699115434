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

// Post-hoc, omniscient evaluation of a RunLog. Every metric can be taken on a
// prefix of the log (the first `prefix` episodes), which is how checkpointed
// curves are produced from a single run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mglab/epoch_vlearning.hpp"
#include "mglab/errors.hpp"
#include "mglab/game.hpp"
#include "mglab/matrix_game.hpp"
#include "mglab/simulation.hpp"

namespace mglab {

struct RegretCurve {
  double total = 0.0;
  std::vector<double> cumulative;  // length = prefix
};

struct OptimismResult {
  std::int64_t violations = 0;  // (k, h, s) with V*_h(s) > V^k_h(s) + 1e-9
  std::int64_t violating_episodes = 0;
  double optimistic_gap = 0.0;  // sum_k V^k_1(s^k_1) - V^{mu^k,nu^k}_1(s^k_1)
};

struct RegretReport {
  std::int64_t K = 0;
  double enr = 0.0;
  double nr = 0.0;
  std::optional<double> extr;  // only for constant opponents
  double c = 0.0;
  std::int64_t l = 0;
  double optimistic_gap = 0.0;
  std::int64_t optimism_violations = 0;
  std::int64_t max_epoch_count = 0;
  std::int64_t restarts = 0;
  std::vector<double> enr_curve;
  std::vector<double> nr_curve;
  std::vector<double> extr_curve;
  std::vector<double> optimistic_gap_curve;
};

inline double TotalVariation(std::span<const double> p, std::span<const double> q) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

class RegretEvaluator {
 public:
  explicit RegretEvaluator(const RunLog& log) : log_(log) {
    Require(!log.episodes.empty(), "RegretEvaluator: empty log");
    Require(log.learner_policies.size() == log.episodes.size() &&
                log.opponent_policies.size() == log.episodes.size(),
            "RegretEvaluator: policy snapshots do not match the episode count");
    played_value_.reserve(log.episodes.size());
    for (std::size_t k = 0; k < log.episodes.size(); ++k) {
      const ValueTable v =
          PolicyValue(log.game, log.learner_policies[k], log.opponent_policies[k]);
      played_value_.push_back(v(0, log.episodes[k].s1));
    }
  }

  std::int64_t K() const { return log_.K(); }

  // V^{mu^k, nu^k}_1(s^k_1), k = 1..K (0-based storage).
  const std::vector<double>& played_values() const { return played_value_; }

  NashTable EmpiricalNash(std::int64_t prefix) const {
    CheckPrefix(prefix);
    return EmpiricalNashValues(log_.game,
                               std::span<const MinPolicy>(log_.opponent_policies).first(prefix));
  }

  const NashTable& ExactNash() const {
    if (!exact_) exact_ = ExactNashValues(log_.game);
    return *exact_;
  }

  RegretCurve Enr(std::int64_t prefix) const { return Against(EmpiricalNash(prefix).values, prefix); }
  RegretCurve Enr(std::int64_t prefix, const NashTable& empirical) const {
    return Against(empirical.values, prefix);
  }
  RegretCurve Nr(std::int64_t prefix) const { return Against(ExactNash().values, prefix); }

  bool OpponentConstant(std::int64_t prefix) const {
    CheckPrefix(prefix);
    const auto& first = log_.opponent_policies.front();
    for (std::int64_t k = 1; k < prefix; ++k)
      if (!log_.opponent_policies[k].Near(first, 1e-12)) return false;
    return true;
  }

  // Against a constant opponent nu the best fixed policy is the DP best
  // response, which is optimal from every initial state at once.
  std::optional<RegretCurve> ExtR(std::int64_t prefix) const {
    if (!OpponentConstant(prefix)) return std::nullopt;
    const auto br = BestResponseMax(log_.game, log_.opponent_policies.front());
    return Against(br.values, prefix);
  }

  double C(std::int64_t prefix, const NashTable& empirical) const {
    CheckPrefix(prefix);
    double total = 0.0;
    for (std::int64_t k = 0; k < prefix; ++k) {
      const auto& states = log_.episodes[k].trajectory.states;
      const auto& nu = log_.opponent_policies[k];
      for (int h = 0; h < log_.game.horizon(); ++h) {
        const int s = states[h];
        total += TotalVariation(nu.at(h, s), empirical.nu_star.at(h, s));
      }
    }
    return total;
  }
  double C(std::int64_t prefix) const { return C(prefix, EmpiricalNash(prefix)); }

  std::int64_t L(std::int64_t prefix) const {
    CheckPrefix(prefix);
    std::int64_t switches = 0;
    for (std::int64_t k = 0; k + 1 < prefix; ++k)
      switches += !log_.opponent_policies[k].Near(log_.opponent_policies[k + 1], 1e-12);
    return 1 + switches;
  }

  // Rebuilds V^k_h(s) from the value-change log and instance restarts and
  // compares it with the empirical Nash values of the prefix.
  OptimismResult Optimism(std::int64_t prefix, const NashTable& empirical) const {
    CheckPrefix(prefix);
    OptimismResult out;
    for (std::int64_t k = 0; k < prefix; ++k)
      out.optimistic_gap += log_.episodes[k].v1_optimistic - played_value_[k];

    const int H = log_.game.horizon();
    std::vector<char> episode_violates(prefix + 2, 0);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < log_.game.num_states(h); ++s) {
        // (episode from which the value holds, value); resets sort after
        // changes stamped for the same episode.
        struct Mark {
          std::int64_t episode;
          int order;
          double value;
        };
        std::vector<Mark> marks;
        for (const auto& inst : log_.instances) marks.push_back({inst.episode, 1, double(H - h)});
        for (const auto& ch : log_.value_changes)
          if (ch.h == h && ch.s == s) marks.push_back({ch.episode, 0, ch.value});
        std::stable_sort(marks.begin(), marks.end(), [](const Mark& x, const Mark& y) {
          return x.episode != y.episode ? x.episode < y.episode : x.order < y.order;
        });
        const double target = empirical.values(h, s) - 1e-9;
        for (std::size_t i = 0; i < marks.size(); ++i) {
          const std::int64_t from = std::max<std::int64_t>(1, marks[i].episode);
          const std::int64_t to =
              std::min(prefix, i + 1 < marks.size() ? marks[i + 1].episode - 1 : prefix);
          if (from > to || marks[i].value >= target) continue;
          out.violations += to - from + 1;
          for (std::int64_t e = from; e <= to; ++e) episode_violates[e] = 1;
        }
      }
    }
    for (char v : episode_violates) out.violating_episodes += v;
    return out;
  }

  // Largest epoch index reached by any (h, s) of any base instance.
  std::int64_t MaxEpochCount(std::int64_t prefix) const {
    CheckPrefix(prefix);
    std::int64_t best = 1;
    const auto& inst = log_.instances;
    std::size_t next = 0;
    std::vector<std::int64_t> rolls;
    auto flush = [&] {
      for (auto r : rolls) best = std::max(best, r + 1);
    };
    std::size_t cells = 0;
    std::vector<std::size_t> offset(log_.game.horizon() + 1, 0);
    for (int h = 0; h < log_.game.horizon(); ++h) offset[h + 1] = offset[h] + log_.game.num_states(h);
    cells = offset.back();
    rolls.assign(cells, 0);
    // Changes are stamped k + 1 for a rollover in episode k.
    for (const auto& ch : log_.value_changes) {
      if (ch.episode - 1 > prefix) break;
      while (next + 1 < inst.size() && inst[next + 1].episode <= ch.episode - 1) {
        flush();
        rolls.assign(cells, 0);
        ++next;
      }
      ++rolls[offset[ch.h] + ch.s];
    }
    flush();
    return best;
  }

  RegretReport Report(std::int64_t prefix) const {
    CheckPrefix(prefix);
    RegretReport r;
    r.K = prefix;
    const NashTable empirical = EmpiricalNash(prefix);
    const RegretCurve enr = Enr(prefix, empirical);
    const RegretCurve nr = Nr(prefix);
    r.enr = enr.total;
    r.enr_curve = enr.cumulative;
    r.nr = nr.total;
    r.nr_curve = nr.cumulative;
    if (auto ext = ExtR(prefix)) {
      r.extr = ext->total;
      r.extr_curve = ext->cumulative;
    }
    r.c = C(prefix, empirical);
    r.l = L(prefix);
    const OptimismResult opt = Optimism(prefix, empirical);
    r.optimistic_gap = opt.optimistic_gap;
    r.optimism_violations = opt.violations;
    r.optimistic_gap_curve.reserve(prefix);
    double gap = 0.0;
    for (std::int64_t k = 0; k < prefix; ++k) {
      gap += log_.episodes[k].v1_optimistic - played_value_[k];
      r.optimistic_gap_curve.push_back(gap);
    }
    r.max_epoch_count = MaxEpochCount(prefix);
    r.restarts = log_.Restarts(prefix);
    return r;
  }

 private:
  void CheckPrefix(std::int64_t prefix) const {
    Require(prefix >= 1 && prefix <= log_.K(), "evaluation prefix outside [1, K]");
  }

  RegretCurve Against(const ValueTable& benchmark, std::int64_t prefix) const {
    CheckPrefix(prefix);
    RegretCurve c;
    c.cumulative.reserve(prefix);
    for (std::int64_t k = 0; k < prefix; ++k) {
      c.total += benchmark(0, log_.episodes[k].s1) - played_value_[k];
      c.cumulative.push_back(c.total);
    }
    return c;
  }

  const RunLog& log_;
  std::vector<double> played_value_;
  mutable std::optional<NashTable> exact_;
};

}  // namespace mglab
