// Copyright 2026 The psis Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSIS_DISTRIBUTIONS_HPP
#define PSIS_DISTRIBUTIONS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "psis/smoothing.hpp"

/**
 * \file
 * \brief Target and proposal families used by the toy experiments.
 *
 * Exponential uses the scale (mean) parameterization. Student-t families carry a squared
 * scale; the multivariate families have diagonal squared scales and, for the t, a single
 * chi-square mixing variable shared by all coordinates of a draw.
 */

namespace psis {

struct Exponential {
  double scale = 1.0;
};

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};

struct StudentT {
  double dof = 1.0;
  double location = 0.0;
  double sq_scale = 1.0;
};

struct MvNormal {
  std::vector<double> mean;
  std::vector<double> variances;
};

struct MvStudentT {
  double dof = 1.0;
  std::vector<double> location;
  std::vector<double> sq_scales;
};

using DistSpec = std::variant<Exponential, Normal, StudentT, MvNormal, MvStudentT>;

/// Throws Error(kInvalidInput) on non-positive scales, dof, or inconsistent dimensions.
void validate(const DistSpec& spec);

std::size_t dimension(const DistSpec& spec);

/// Row-major S x d block of draws.
class DrawMatrix {
 public:
  DrawMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  /// Column 0 as a vector; the draws themselves for univariate families.
  std::vector<double> first_column() const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Deterministic in (spec, n, seed); uses its own engine, no shared state.
DrawMatrix sample(const DistSpec& spec, std::size_t n, std::uint64_t seed);

/// Throws Error(kInvalidInput) when x has the wrong dimension.
double log_density(const DistSpec& spec, std::span<const double> x);

/// log p(x) - log g(x) per row. Throws if the proposal density vanishes at a draw.
LogRatios log_ratio(const DistSpec& target, const DistSpec& proposal, const DrawMatrix& draws);

}  // namespace psis

#endif  // PSIS_DISTRIBUTIONS_HPP
