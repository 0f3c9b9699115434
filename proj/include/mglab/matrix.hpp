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

#include <cstddef>
#include <span>
#include <vector>

namespace mglab {

// Dense row-major matrix of doubles. Only what the tabular solvers need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }

  // x^T M
  std::vector<double> LeftMultiply(std::span<const double> x) const {
    std::vector<double> out(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out[j] += x[i] * (*this)(i, j);
    }
    return out;
  }

  // M y
  std::vector<double> RightMultiply(std::span<const double> y) const {
    std::vector<double> out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * y[j];
    }
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mglab
