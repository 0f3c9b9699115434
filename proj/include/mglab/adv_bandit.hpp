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

// Adversarial bandit: FTRL with 1/2-Tsallis entropy and implicit-exploration
// (IX) loss estimates.
//
// After the t-th update the played distribution is
//   p_i = (eta_t * (L_i - x))^{-2},   eta_t = 1 / sqrt(t),
// where L is the cumulative IX loss estimate and x < min_i L_i normalizes p.
// The IX estimate for the played arm is loss / (p_arm + gamma_t), gamma_t =
// eta_t / 2. Rewards in [0, 1] come in; losses 1 - reward are used inside.
//
// With `doubling` set, the learner restarts whenever t reaches a power of two
// and keeps eta fixed at 2^{-j/2} inside segment j.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mglab/errors.hpp"

namespace mglab {

class TsallisIxBandit {
 public:
  static constexpr double kSolveTolerance = 1e-12;
  static constexpr int kMaxIterations = 100;
  static constexpr double kClampGap = 1e9;

  explicit TsallisIxBandit(int num_arms, bool doubling = false)
      : num_arms_(num_arms), doubling_(doubling) {
    Require(num_arms >= 1, "bandit needs at least one arm");
    Reset();
  }

  void Reset() {
    t_ = 0;
    segment_start_ = 1;
    cum_loss_.assign(num_arms_, 0.0);
    dist_.assign(num_arms_, 1.0 / num_arms_);
  }

  int num_arms() const { return num_arms_; }
  std::int64_t t() const { return t_; }
  std::span<const double> distribution() const { return dist_; }
  std::span<const double> cumulative_loss() const { return cum_loss_; }

  // Learning rate used for the distribution after `t` updates.
  double LearningRate() const {
    if (t_ == 0) return 1.0;
    if (doubling_) return 1.0 / std::sqrt(static_cast<double>(segment_start_));
    return 1.0 / std::sqrt(static_cast<double>(t_));
  }

  std::span<const double> Update(int arm, double reward) {
    if (arm < 0 || arm >= num_arms_)
      throw PreconditionError("bandit arm " + std::to_string(arm) + " out of range");
    if (!(reward >= 0.0 && reward <= 1.0))
      throw PreconditionError("bandit reward " + std::to_string(reward) + " outside [0,1]");
    ++t_;
    if (doubling_ && t_ >= 2 && (t_ & (t_ - 1)) == 0) {
      // New segment: forget the past, keep counting.
      segment_start_ = t_;
      std::fill(cum_loss_.begin(), cum_loss_.end(), 0.0);
      std::fill(dist_.begin(), dist_.end(), 1.0 / num_arms_);
    }
    const double eta = LearningRate();
    const double gamma = eta / 2.0;
    const double loss = 1.0 - reward;
    cum_loss_[arm] += loss / (dist_[arm] + gamma);
    dist_ = SolveDistribution(cum_loss_, eta);
    return dist_;
  }

  // FTRL fixed point for given cumulative losses and learning rate.
  static std::vector<double> SolveDistribution(std::span<const double> cum_loss, double eta) {
    const int n = static_cast<int>(cum_loss.size());
    const double lmin = *std::min_element(cum_loss.begin(), cum_loss.end());
    const double x = SolveNormalizer(cum_loss, eta);
    std::vector<double> p(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (cum_loss[i] - lmin > kClampGap) continue;
      const double w = 1.0 / (eta * (cum_loss[i] - x));
      p[i] = w * w;
      total += p[i];
    }
    for (auto& v : p) v /= total;
    return p;
  }

  // The x < min L solving sum_i (eta (L_i - x))^{-2} = 1 over unclamped arms.
  static double SolveNormalizer(std::span<const double> cum_loss, double eta) {
    const int n = static_cast<int>(cum_loss.size());
    const double lmin = *std::min_element(cum_loss.begin(), cum_loss.end());
    std::vector<bool> active(n);
    for (int i = 0; i < n; ++i) active[i] = cum_loss[i] - lmin <= kClampGap;

    // f(x) = sum_i (eta (L_i - x))^{-2} - 1 is increasing and convex on
    // x < min L, so Newton from the left overshoots once and then converges
    // monotonically from the right.
    auto mass = [&](double x, double* deriv) {
      double f = -1.0, df = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!active[i]) continue;
        const double w = 1.0 / (eta * (cum_loss[i] - x));
        f += w * w;
        df += 2.0 * eta * w * w * w;
      }
      if (deriv) *deriv = df;
      return f;
    };

    double x = lmin - std::sqrt(static_cast<double>(n)) / eta;
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      double df = 0.0;
      const double f = mass(x, &df);
      if (std::abs(f) <= kSolveTolerance) {
        converged = true;
        break;
      }
      const double next = x - f / df;
      if (!(next < lmin) || !std::isfinite(next)) break;
      x = next;
    }
    if (!converged) {
      double lo = lmin - 1e6, hi = lmin - 1e-12;
      for (int it = 0; it < 4 * kMaxIterations && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = mass(mid, nullptr);
        if (std::abs(f) <= kSolveTolerance) {
          lo = hi = mid;
          break;
        }
        (f < 0.0 ? lo : hi) = mid;
      }
      x = 0.5 * (lo + hi);
    }
    return x;
  }

  friend bool operator==(const TsallisIxBandit&, const TsallisIxBandit&) = default;

 private:
  int num_arms_;
  bool doubling_;
  std::int64_t t_ = 0;
  std::int64_t segment_start_ = 1;
  std::vector<double> cum_loss_;
  std::vector<double> dist_;
};

}  // namespace mglab
