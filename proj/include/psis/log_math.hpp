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

#ifndef PSIS_LOG_MATH_HPP
#define PSIS_LOG_MATH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

/**
 * \file
 * \brief Log-space accumulation helpers shared by the weight transforms and estimators.
 */

namespace psis {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum(exp(x))) over the range; returns -inf for an empty range or all -inf entries.
inline double log_sum_exp(std::span<const double> x) {
  if (x.empty()) {
    return kNegInf;
  }
  const double max = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(max)) {
    return max;
  }
  double sum = 0.0;
  for (double v : x) {
    sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

/// Streaming log-sum-exp. Rescales the running sum whenever a new maximum appears.
class LogSumExpAccumulator {
 public:
  void add(double v) {
    if (v == kNegInf) {
      return;
    }
    if (v <= max_) {
      sum_ += std::exp(v - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }

  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

}  // namespace psis

#endif  // PSIS_LOG_MATH_HPP
