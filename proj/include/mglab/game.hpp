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

// Tabular two-player episodic Markov game with layered states.
//
// Steps are 0-based: h = 0..H-1 are decision steps and h = H holds the single
// terminal state. The max-player (learner) picks a in A_h, the min-player
// (opponent) picks b in B_h simultaneously; r_h(s, a, b) lies in [0, 1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mglab/errors.hpp"
#include "mglab/matrix.hpp"

namespace mglab {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from 53 random bits. Portable across standard
// libraries, unlike std::uniform_real_distribution.
inline double UniformUnit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Inverse-CDF draw from a probability vector.
inline int SampleIndex(std::span<const double> probs, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct GameDims {
  int horizon = 0;
  std::vector<int> states;     // size H+1, states.back() == 1
  std::vector<int> actions_a;  // size H
  std::vector<int> actions_b;  // size H

  // Same |S_h|, |A_h|, |B_h| at every decision step.
  static GameDims Uniform(int horizon, int states, int actions_a, int actions_b) {
    GameDims d;
    d.horizon = horizon;
    d.states.assign(horizon, states);
    d.states.push_back(1);
    d.actions_a.assign(horizon, actions_a);
    d.actions_b.assign(horizon, actions_b);
    return d;
  }

  // |S| = sum over decision steps of |S_h| (terminal excluded).
  int TotalStates() const {
    return std::accumulate(states.begin(), states.begin() + horizon, 0);
  }
  int MaxActionsA() const { return *std::max_element(actions_a.begin(), actions_a.end()); }
  int MaxActionsB() const { return *std::max_element(actions_b.begin(), actions_b.end()); }

  void Validate() const {
    if (horizon < 1) throw GameConstructionError("horizon must be >= 1");
    if (static_cast<int>(states.size()) != horizon + 1)
      throw GameConstructionError("states must list H+1 entries");
    if (states.back() != 1) throw GameConstructionError("step H+1 must hold exactly one state");
    if (static_cast<int>(actions_a.size()) != horizon ||
        static_cast<int>(actions_b.size()) != horizon)
      throw GameConstructionError("action counts must list H entries");
    for (int h = 0; h < horizon; ++h) {
      if (states[h] < 1 || actions_a[h] < 1 || actions_b[h] < 1)
        throw GameConstructionError("dimensions must be >= 1 at step " + std::to_string(h));
    }
  }

  friend bool operator==(const GameDims&, const GameDims&) = default;
};

class MarkovGame {
 public:
  static constexpr double kRenormalizeTolerance = 1e-9;

  MarkovGame() = default;

  // rewards[h][s][a][b]; transitions[h][s][a][b] is a distribution over S_{h+1}.
  // Transition vectors off by at most 1e-9 in total mass are renormalized;
  // larger deviations are rejected. Vectors within 1e-12 of unit mass are
  // stored as given, so write/read cycles are exact.
  MarkovGame(GameDims dims, const std::vector<std::vector<std::vector<std::vector<double>>>>& rewards,
             const std::vector<std::vector<std::vector<std::vector<std::vector<double>>>>>& transitions)
      : dims_(std::move(dims)) {
    dims_.Validate();
    Allocate();
    const int H = dims_.horizon;
    auto shape_error = [](int h) {
      return GameConstructionError("reward/transition shape mismatch at step " + std::to_string(h));
    };
    if (static_cast<int>(rewards.size()) != H || static_cast<int>(transitions.size()) != H)
      throw shape_error(0);
    for (int h = 0; h < H; ++h) {
      if (static_cast<int>(rewards[h].size()) != dims_.states[h] ||
          static_cast<int>(transitions[h].size()) != dims_.states[h])
        throw shape_error(h);
      for (int s = 0; s < dims_.states[h]; ++s) {
        if (static_cast<int>(rewards[h][s].size()) != dims_.actions_a[h] ||
            static_cast<int>(transitions[h][s].size()) != dims_.actions_a[h])
          throw shape_error(h);
        for (int a = 0; a < dims_.actions_a[h]; ++a) {
          if (static_cast<int>(rewards[h][s][a].size()) != dims_.actions_b[h] ||
              static_cast<int>(transitions[h][s][a].size()) != dims_.actions_b[h])
            throw shape_error(h);
          for (int b = 0; b < dims_.actions_b[h]; ++b) {
            SetReward(h, s, a, b, rewards[h][s][a][b]);
            SetTransition(h, s, a, b, transitions[h][s][a][b]);
          }
        }
      }
    }
  }

  const GameDims& dims() const { return dims_; }
  int horizon() const { return dims_.horizon; }
  int num_states(int h) const { return dims_.states[h]; }
  int num_actions_a(int h) const { return dims_.actions_a[h]; }
  int num_actions_b(int h) const { return dims_.actions_b[h]; }

  double reward(int h, int s, int a, int b) const { return rewards_[Index(h, s, a, b)]; }

  std::span<const double> transition(int h, int s, int a, int b) const {
    const std::size_t n = dims_.states[h + 1];
    return {transitions_.data() + trans_offset_[h] + LocalIndex(h, s, a, b) * n, n};
  }

  void CheckState(int h, int s) const {
    if (h < 0 || h > dims_.horizon) throw IndexError("step " + std::to_string(h) + " out of range");
    if (s < 0 || s >= dims_.states[h])
      throw IndexError("state " + std::to_string(s) + " out of range at step " + std::to_string(h));
  }

  // Q(a, b) = r_h(s, a, b) + sum_s' P_h(s' | s, a, b) next[s'].
  Matrix QMatrix(int h, int s, std::span<const double> next) const {
    Matrix q(dims_.actions_a[h], dims_.actions_b[h]);
    for (int a = 0; a < q.rows(); ++a) {
      for (int b = 0; b < q.cols(); ++b) {
        const auto p = transition(h, s, a, b);
        double v = reward(h, s, a, b);
        for (std::size_t sp = 0; sp < p.size(); ++sp) v += p[sp] * next[sp];
        q(a, b) = v;
      }
    }
    return q;
  }

 private:
  void Allocate() {
    const int H = dims_.horizon;
    step_offset_.assign(H + 1, 0);
    trans_offset_.assign(H + 1, 0);
    for (int h = 0; h < H; ++h) {
      const std::size_t cells = static_cast<std::size_t>(dims_.states[h]) * dims_.actions_a[h] *
                                dims_.actions_b[h];
      step_offset_[h + 1] = step_offset_[h] + cells;
      trans_offset_[h + 1] = trans_offset_[h] + cells * dims_.states[h + 1];
    }
    rewards_.assign(step_offset_[H], 0.0);
    transitions_.assign(trans_offset_[H], 0.0);
  }

  std::size_t LocalIndex(int h, int s, int a, int b) const {
    return (static_cast<std::size_t>(s) * dims_.actions_a[h] + a) * dims_.actions_b[h] + b;
  }
  std::size_t Index(int h, int s, int a, int b) const {
    return step_offset_[h] + LocalIndex(h, s, a, b);
  }

  void SetReward(int h, int s, int a, int b, double r) {
    if (!(r >= 0.0 && r <= 1.0))
      throw GameConstructionError("reward outside [0,1] at (h=" + std::to_string(h) +
                                  ", s=" + std::to_string(s) + ")");
    rewards_[Index(h, s, a, b)] = r;
  }

  void SetTransition(int h, int s, int a, int b, const std::vector<double>& p) {
    const std::size_t n = dims_.states[h + 1];
    if (p.size() != n)
      throw GameConstructionError("transition length mismatch at step " + std::to_string(h));
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw GameConstructionError("negative transition probability");
      total += x;
    }
    if (std::abs(total - 1.0) > kRenormalizeTolerance)
      throw GameConstructionError("transition at (h=" + std::to_string(h) + ", s=" +
                                  std::to_string(s) + ", a=" + std::to_string(a) + ", b=" +
                                  std::to_string(b) + ") sums to " + std::to_string(total));
    double* dst = transitions_.data() + trans_offset_[h] + LocalIndex(h, s, a, b) * n;
    const double scale = std::abs(total - 1.0) > 1e-12 ? total : 1.0;
    for (std::size_t i = 0; i < n; ++i) dst[i] = p[i] / scale;
  }

  GameDims dims_;
  std::vector<std::size_t> step_offset_;
  std::vector<std::size_t> trans_offset_;
  std::vector<double> rewards_;
  std::vector<double> transitions_;
};

enum class Side { kMax, kMin };

// Per-(h, s) probability vectors for one player. Max = learner over A_h,
// Min = opponent over B_h.
template <Side kSide>
class Policy {
 public:
  using Table = std::vector<std::vector<std::vector<double>>>;

  Policy() = default;
  explicit Policy(Table probs) : probs_(std::move(probs)) {}

  static int NumActions(const MarkovGame& game, int h) {
    return kSide == Side::kMax ? game.num_actions_a(h) : game.num_actions_b(h);
  }

  static Policy Uniform(const MarkovGame& game) {
    Table t(game.horizon());
    for (int h = 0; h < game.horizon(); ++h) {
      const int n = NumActions(game, h);
      t[h].assign(game.num_states(h), std::vector<double>(n, 1.0 / n));
    }
    return Policy(std::move(t));
  }

  // Deterministic policy; choice[h][s] is the action index.
  static Policy Pure(const MarkovGame& game, const std::vector<std::vector<int>>& choice) {
    Table t(game.horizon());
    for (int h = 0; h < game.horizon(); ++h) {
      const int n = NumActions(game, h);
      t[h].assign(game.num_states(h), std::vector<double>(n, 0.0));
      for (int s = 0; s < game.num_states(h); ++s) t[h][s].at(choice.at(h).at(s)) = 1.0;
    }
    return Policy(std::move(t));
  }

  int horizon() const { return static_cast<int>(probs_.size()); }
  int num_states(int h) const { return static_cast<int>(probs_[h].size()); }

  std::span<const double> at(int h, int s) const { return probs_[h][s]; }
  std::vector<double>& mutable_at(int h, int s) { return probs_[h][s]; }
  const Table& table() const { return probs_; }

  // Entrywise equality within tol.
  bool Near(const Policy& other, double tol) const {
    if (probs_.size() != other.probs_.size()) return false;
    for (std::size_t h = 0; h < probs_.size(); ++h) {
      if (probs_[h].size() != other.probs_[h].size()) return false;
      for (std::size_t s = 0; s < probs_[h].size(); ++s) {
        const auto& x = probs_[h][s];
        const auto& y = other.probs_[h][s];
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (std::abs(x[i] - y[i]) > tol) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  Table probs_;
};

using MaxPolicy = Policy<Side::kMax>;
using MinPolicy = Policy<Side::kMin>;

inline bool IsDistribution(std::span<const double> p, double tol) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) return false;
    total += x;
  }
  return std::abs(total - 1.0) <= tol;
}

template <Side kSide>
void ValidatePolicy(const MarkovGame& game, const Policy<kSide>& policy, double tol = 1e-12) {
  if (policy.horizon() != game.horizon()) throw PreconditionError("policy horizon mismatch");
  for (int h = 0; h < game.horizon(); ++h) {
    if (policy.num_states(h) != game.num_states(h))
      throw PreconditionError("policy state count mismatch at step " + std::to_string(h));
    for (int s = 0; s < game.num_states(h); ++s) {
      const auto p = policy.at(h, s);
      if (static_cast<int>(p.size()) != Policy<kSide>::NumActions(game, h))
        throw PreconditionError("policy action count mismatch at step " + std::to_string(h));
      if (!IsDistribution(p, tol))
        throw PreconditionError("policy at (h=" + std::to_string(h) + ", s=" + std::to_string(s) +
                                ") is not a distribution");
    }
  }
}

struct Trajectory {
  std::vector<int> states;  // s_0 .. s_H (s_H is terminal)
  std::vector<int> actions_a;
  std::vector<int> actions_b;
  std::vector<double> rewards;

  double Return() const { return std::accumulate(rewards.begin(), rewards.end(), 0.0); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// V_h(s) for h = 0..H; the terminal layer is identically zero.
struct ValueTable {
  std::vector<std::vector<double>> values;

  static ValueTable Zeros(const GameDims& dims) {
    ValueTable t;
    t.values.resize(dims.horizon + 1);
    for (int h = 0; h <= dims.horizon; ++h) t.values[h].assign(dims.states[h], 0.0);
    return t;
  }

  double operator()(int h, int s) const { return values[h][s]; }
  double& operator()(int h, int s) { return values[h][s]; }
  std::span<const double> layer(int h) const { return values[h]; }
};

// Plays one episode from s1. Draw order per step: a, b, then the next state,
// so a fixed seed fixes the whole trajectory.
inline Trajectory SampleEpisode(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu,
                                Rng& rng, int s1) {
  game.CheckState(0, s1);
  const int H = game.horizon();
  Trajectory t;
  t.states.reserve(H + 1);
  t.states.push_back(s1);
  int s = s1;
  for (int h = 0; h < H; ++h) {
    const int a = SampleIndex(mu.at(h, s), UniformUnit(rng));
    const int b = SampleIndex(nu.at(h, s), UniformUnit(rng));
    if (a >= game.num_actions_a(h) || b >= game.num_actions_b(h))
      throw IndexError("sampled action out of range at step " + std::to_string(h));
    t.actions_a.push_back(a);
    t.actions_b.push_back(b);
    t.rewards.push_back(game.reward(h, s, a, b));
    s = SampleIndex(game.transition(h, s, a, b), UniformUnit(rng));
    t.states.push_back(s);
  }
  return t;
}

// Expected value of Q under independent mixed strategies.
inline double MixedValue(const Matrix& q, std::span<const double> mu, std::span<const double> nu) {
  double v = 0.0;
  for (int a = 0; a < q.rows(); ++a) {
    if (mu[a] == 0.0) continue;
    double row = 0.0;
    for (int b = 0; b < q.cols(); ++b) row += q(a, b) * nu[b];
    v += mu[a] * row;
  }
  return v;
}

// Exact V^{mu,nu} by backward induction.
inline ValueTable PolicyValue(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu) {
  ValueTable v = ValueTable::Zeros(game.dims());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < game.num_states(h); ++s) {
      v(h, s) = MixedValue(game.QMatrix(h, s, v.layer(h + 1)), mu.at(h, s), nu.at(h, s));
    }
  }
  return v;
}

template <class PolicyT>
struct BestResponse {
  PolicyT policy;
  ValueTable values;
};

namespace detail {
constexpr double kTieTolerance = 1e-12;
}

// Deterministic maximizing response to a fixed opponent policy, optimal at
// every (h, s) simultaneously. Ties go to the lowest action index.
inline BestResponse<MaxPolicy> BestResponseMax(const MarkovGame& game, const MinPolicy& nu) {
  ValueTable v = ValueTable::Zeros(game.dims());
  std::vector<std::vector<int>> choice(game.horizon());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    choice[h].resize(game.num_states(h));
    for (int s = 0; s < game.num_states(h); ++s) {
      const Matrix q = game.QMatrix(h, s, v.layer(h + 1));
      const std::vector<double> by_action = q.RightMultiply(nu.at(h, s));
      int best = 0;
      for (int a = 1; a < q.rows(); ++a)
        if (by_action[a] > by_action[best] + detail::kTieTolerance) best = a;
      choice[h][s] = best;
      v(h, s) = by_action[best];
    }
  }
  return {MaxPolicy::Pure(game, choice), std::move(v)};
}

// Mirror of BestResponseMax for the min-player.
inline BestResponse<MinPolicy> BestResponseMin(const MarkovGame& game, const MaxPolicy& mu) {
  ValueTable v = ValueTable::Zeros(game.dims());
  std::vector<std::vector<int>> choice(game.horizon());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    choice[h].resize(game.num_states(h));
    for (int s = 0; s < game.num_states(h); ++s) {
      const Matrix q = game.QMatrix(h, s, v.layer(h + 1));
      const std::vector<double> by_action = q.LeftMultiply(mu.at(h, s));
      int best = 0;
      for (int b = 1; b < q.cols(); ++b)
        if (by_action[b] < by_action[best] - detail::kTieTolerance) best = b;
      choice[h][s] = best;
      v(h, s) = by_action[best];
    }
  }
  return {MinPolicy::Pure(game, choice), std::move(v)};
}

// Dirichlet(1) draw over n outcomes.
inline std::vector<double> RandomSimplexPoint(int n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log1p(-UniformUnit(rng));
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Uniform rewards in [0,1] and Dirichlet(1) transitions.
inline MarkovGame RandomGame(const GameDims& dims, std::uint64_t seed) {
  dims.Validate();
  Rng rng(SplitMix64(seed));
  const int H = dims.horizon;
  std::vector<std::vector<std::vector<std::vector<double>>>> r(H);
  std::vector<std::vector<std::vector<std::vector<std::vector<double>>>>> p(H);
  for (int h = 0; h < H; ++h) {
    r[h].resize(dims.states[h]);
    p[h].resize(dims.states[h]);
    for (int s = 0; s < dims.states[h]; ++s) {
      r[h][s].assign(dims.actions_a[h], std::vector<double>(dims.actions_b[h]));
      p[h][s].resize(dims.actions_a[h]);
      for (int a = 0; a < dims.actions_a[h]; ++a) {
        p[h][s][a].resize(dims.actions_b[h]);
        for (int b = 0; b < dims.actions_b[h]; ++b) {
          r[h][s][a][b] = UniformUnit(rng);
          p[h][s][a][b] = RandomSimplexPoint(dims.states[h + 1], rng);
        }
      }
    }
  }
  return MarkovGame(dims, r, p);
}

template <Side kSide>
Policy<kSide> RandomPolicy(const MarkovGame& game, Rng& rng) {
  typename Policy<kSide>::Table t(game.horizon());
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(h); ++s)
      t[h].push_back(RandomSimplexPoint(Policy<kSide>::NumActions(game, h), rng));
  }
  return Policy<kSide>(std::move(t));
}

template <Side kSide>
Policy<kSide> RandomPurePolicy(const MarkovGame& game, Rng& rng) {
  std::vector<std::vector<int>> choice(game.horizon());
  for (int h = 0; h < game.horizon(); ++h) {
    const int n = Policy<kSide>::NumActions(game, h);
    for (int s = 0; s < game.num_states(h); ++s)
      choice[h].push_back(std::min(n - 1, static_cast<int>(UniformUnit(rng) * n)));
  }
  return Policy<kSide>::Pure(game, choice);
}

}  // namespace mglab
