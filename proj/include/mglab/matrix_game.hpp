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

// Zero-sum matrix games and the state-wise (restricted) Nash recursions
// built on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mglab/errors.hpp"
#include "mglab/game.hpp"
#include "mglab/matrix.hpp"

namespace mglab {

enum class SolveStatus { kOptimal, kDegenerateOptimal };

struct MatrixGameSolution {
  double value = 0.0;                // max_p min_q p^T M q
  std::vector<double> row_strategy;  // maximizer
  std::vector<double> col_strategy;  // minimizer
  SolveStatus status = SolveStatus::kOptimal;
  int pivots = 0;
};

namespace detail {

constexpr double kPivotEps = 1e-12;

inline std::string EchoMatrix(const Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (int i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

inline void CleanDistribution(std::vector<double>& p) {
  double total = 0.0;
  for (auto& x : p) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  if (total <= 0.0) throw SolverError("LP returned an empty strategy");
  for (auto& x : p) x /= total;
}

}  // namespace detail

// Solves max_p min_q p^T M q (rows maximize) as a linear program.
//
// With M' = M + shift > 0, the column player's program
//   max 1^T y  s.t.  M' y <= 1, y >= 0
// starts feasible at y = 0, so a single-phase dense primal simplex suffices.
// Entering and leaving variables follow Bland's rule, which rules out cycling
// and makes the returned vertex a deterministic function of M. The row
// strategy is read off the slack reduced costs (the dual solution).
inline MatrixGameSolution SolveZeroSum(const Matrix& m) {
  const int rows = m.rows();
  const int cols = m.cols();
  Require(rows >= 1 && cols >= 1, "SolveZeroSum: empty matrix");
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Require(std::isfinite(m(i, j)), "SolveZeroSum: non-finite entry");
      lo = std::min(lo, m(i, j));
    }
  const double shift = 1.0 - lo;

  // Columns: y_0..y_{cols-1}, slack_0..slack_{rows-1}, rhs.
  const int width = cols + rows + 1;
  const int rhs = cols + rows;
  Matrix t(rows, width);
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t(i, j) = m(i, j) + shift;
    t(i, cols + i) = 1.0;
    t(i, rhs) = 1.0;
    basis[i] = cols + i;
  }
  // Reduced costs c_j - z_j; objective tracked separately.
  std::vector<double> reduced(cols + rows, 0.0);
  std::fill(reduced.begin(), reduced.begin() + cols, 1.0);
  double objective = 0.0;

  MatrixGameSolution sol;
  const int max_pivots = 50 * (rows + cols) + 1000;
  while (true) {
    int enter = -1;
    for (int j = 0; j < cols + rows; ++j) {
      if (reduced[j] > detail::kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      const double a = t(i, enter);
      if (a <= detail::kPivotEps) continue;
      const double ratio = t(i, rhs) / a;
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw SolverError("zero-sum LP unbounded for M = " + detail::EchoMatrix(m));
    if (++sol.pivots > max_pivots)
      throw SolverError("zero-sum LP exceeded pivot cap for M = " + detail::EchoMatrix(m));

    const double piv = t(leave, enter);
    for (int j = 0; j < width; ++j) t(leave, j) /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) t(i, j) -= f * t(leave, j);
      t(i, enter) = 0.0;
    }
    const double f = reduced[enter];
    for (int j = 0; j < cols + rows; ++j) reduced[j] -= f * t(leave, j);
    reduced[enter] = 0.0;
    objective += f * t(leave, rhs);
    basis[leave] = enter;
  }

  if (!(objective > 0.0)) throw SolverError("zero-sum LP degenerate objective for M = " + detail::EchoMatrix(m));

  sol.col_strategy.assign(cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < cols) sol.col_strategy[basis[i]] = t(i, rhs);
    if (std::abs(t(i, rhs)) <= 1e-12) sol.status = SolveStatus::kDegenerateOptimal;
  }
  sol.row_strategy.assign(rows, 0.0);
  for (int i = 0; i < rows; ++i) sol.row_strategy[i] = -reduced[cols + i];
  detail::CleanDistribution(sol.col_strategy);
  detail::CleanDistribution(sol.row_strategy);
  sol.value = 1.0 / objective - shift;
  return sol;
}

// max_p min_j (p^T M)_j and min_q max_i (M q)_i for the given strategies.
struct DualityBounds {
  double lower;
  double upper;
};

inline DualityBounds EvaluateStrategies(const Matrix& m, std::span<const double> row,
                                        std::span<const double> col) {
  const auto by_col = m.LeftMultiply(row);
  const auto by_row = m.RightMultiply(col);
  return {*std::min_element(by_col.begin(), by_col.end()),
          *std::max_element(by_row.begin(), by_row.end())};
}

struct RestrictedSolution {
  double value = 0.0;
  std::vector<double> mu;       // maximizer over Delta(A)
  std::vector<double> weights;  // minimizer's mixture over the opponent set
};

// max over mu in Delta(A) of min over nu in opp_set of mu^T Q nu.
inline RestrictedSolution RestrictedMaxmin(const Matrix& q,
                                           std::span<const std::span<const double>> opp_set) {
  Require(!opp_set.empty(), "RestrictedMaxmin: opponent set is empty");
  Matrix m(q.rows(), static_cast<int>(opp_set.size()));
  for (int j = 0; j < m.cols(); ++j) {
    const auto nu = opp_set[j];
    Require(static_cast<int>(nu.size()) == q.cols() && IsDistribution(nu, 1e-9),
            "RestrictedMaxmin: opponent policy is not a distribution over B");
    const auto col = q.RightMultiply(nu);
    for (int a = 0; a < m.rows(); ++a) m(a, j) = col[a];
  }
  MatrixGameSolution sol = SolveZeroSum(m);
  return {sol.value, std::move(sol.row_strategy), std::move(sol.col_strategy)};
}

inline RestrictedSolution RestrictedMaxmin(const Matrix& q,
                                           const std::vector<std::vector<double>>& opp_set) {
  std::vector<std::span<const double>> views(opp_set.begin(), opp_set.end());
  return RestrictedMaxmin(q, std::span<const std::span<const double>>(views));
}

// State-wise Nash values with the per-(h, s) maximin and minimax strategies.
// For the empirical variant, nu_star(h, s) is the LP's column mixture mapped
// back onto B_h, i.e. a point in the convex hull of the logged policies.
struct NashTable {
  ValueTable values;
  MaxPolicy mu_star;
  MinPolicy nu_star;
  std::vector<std::vector<int>> distinct_policies;  // per (h, s); 0 for exact
};

// Indices of pairwise-distinct vectors (entrywise within tol), keeping the
// first occurrence in sorted order.
inline std::vector<std::size_t> DistinctVectors(std::span<const std::span<const double>> items,
                                                double tol) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::lexicographical_compare(items[x].begin(), items[x].end(), items[y].begin(),
                                        items[y].end());
  });
  auto near = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < items[x].size(); ++i)
      if (std::abs(items[x][i] - items[y][i]) > tol) return false;
    return true;
  };
  std::vector<std::size_t> keep;
  for (std::size_t idx : order) {
    // Sorted neighbours cover the common case; the short backward scan catches
    // tolerance-equal vectors separated by a lexicographically closer one.
    bool dup = false;
    for (auto it = keep.rbegin(); it != keep.rend() && it - keep.rbegin() < 8; ++it) {
      if (near(*it, idx)) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(idx);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

// Backward induction with the min-player restricted, at each (h, s), to the
// policies it actually played there.
inline NashTable EmpiricalNashValues(const MarkovGame& game, std::span<const MinPolicy> opp_log) {
  Require(!opp_log.empty(), "EmpiricalNashValues: opponent log is empty");
  NashTable out{ValueTable::Zeros(game.dims()), MaxPolicy::Uniform(game), MinPolicy::Uniform(game),
                std::vector<std::vector<int>>(game.horizon())};
  std::vector<std::span<const double>> column(opp_log.size());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    out.distinct_policies[h].resize(game.num_states(h));
    for (int s = 0; s < game.num_states(h); ++s) {
      for (std::size_t k = 0; k < opp_log.size(); ++k) column[k] = opp_log[k].at(h, s);
      const auto keep = DistinctVectors(column, 1e-12);
      std::vector<std::span<const double>> set;
      set.reserve(keep.size());
      for (std::size_t k : keep) set.push_back(column[k]);
      const Matrix q = game.QMatrix(h, s, out.values.layer(h + 1));
      RestrictedSolution sol = RestrictedMaxmin(q, set);
      out.values(h, s) = sol.value;
      out.mu_star.mutable_at(h, s) = std::move(sol.mu);
      auto& nu = out.nu_star.mutable_at(h, s);
      std::fill(nu.begin(), nu.end(), 0.0);
      for (std::size_t j = 0; j < set.size(); ++j)
        for (std::size_t b = 0; b < nu.size(); ++b) nu[b] += sol.weights[j] * set[j][b];
      out.distinct_policies[h][s] = static_cast<int>(set.size());
    }
  }
  return out;
}

// Exact state Nash values: the min-player ranges over all of Delta(B_h).
inline NashTable ExactNashValues(const MarkovGame& game) {
  NashTable out{ValueTable::Zeros(game.dims()), MaxPolicy::Uniform(game), MinPolicy::Uniform(game),
                std::vector<std::vector<int>>(game.horizon())};
  for (int h = game.horizon() - 1; h >= 0; --h) {
    out.distinct_policies[h].assign(game.num_states(h), 0);
    for (int s = 0; s < game.num_states(h); ++s) {
      MatrixGameSolution sol = SolveZeroSum(game.QMatrix(h, s, out.values.layer(h + 1)));
      out.values(h, s) = sol.value;
      out.mu_star.mutable_at(h, s) = std::move(sol.row_strategy);
      out.nu_star.mutable_at(h, s) = std::move(sol.col_strategy);
    }
  }
  return out;
}

}  // namespace mglab
