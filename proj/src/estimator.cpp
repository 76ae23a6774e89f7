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

#include "psis/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psis/error.hpp"
#include "psis/log_math.hpp"

namespace psis {

namespace {

void check_log_weights(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw Error(ErrorCode::kInvalidInput, "weights must be nonempty");
  }
  for (double v : log_weights) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvalidInput, "log weights must be finite or -inf");
    }
  }
}

// Two-pass log-sum-exp of log_weights[s] + log_factor(s) over the entries selected by `keep`.
template <typename Keep, typename LogFactor>
double weighted_log_sum(std::span<const double> log_weights, Keep keep, LogFactor log_factor) {
  double max = kNegInf;
  for (std::size_t s = 0; s < log_weights.size(); ++s) {
    if (keep(s)) {
      max = std::max(max, log_weights[s] + log_factor(s));
    }
  }
  if (max == kNegInf) {
    return kNegInf;
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < log_weights.size(); ++s) {
    if (keep(s)) {
      sum += std::exp(log_weights[s] + log_factor(s) - max);
    }
  }
  return max + std::log(sum);
}

}  // namespace

double self_normalized_estimate(std::span<const double> log_weights, std::span<const double> h_values) {
  check_log_weights(log_weights);
  if (h_values.size() != log_weights.size()) {
    throw Error(ErrorCode::kInvalidInput, "weight and integrand lengths differ (" +
                                              std::to_string(log_weights.size()) + " vs " +
                                              std::to_string(h_values.size()) + ")");
  }
  for (double h : h_values) {
    if (!std::isfinite(h)) {
      throw Error(ErrorCode::kInvalidInput, "integrand values must be finite");
    }
  }
  // h == 1 on every entry reproduces the denominator bit for bit, so the estimate is exactly 1.
  const auto log_abs_h = [&](std::size_t s) { return std::log(std::abs(h_values[s])); };
  const double log_den =
      weighted_log_sum(log_weights, [](std::size_t) { return true; }, [](std::size_t) { return 0.0; });
  if (log_den == kNegInf) {
    throw Error(ErrorCode::kInvalidInput, "all weights are zero");
  }
  const double log_pos =
      weighted_log_sum(log_weights, [&](std::size_t s) { return h_values[s] > 0.0; }, log_abs_h);
  const double log_neg =
      weighted_log_sum(log_weights, [&](std::size_t s) { return h_values[s] < 0.0; }, log_abs_h);
  return std::exp(log_pos - log_den) - std::exp(log_neg - log_den);
}

double effective_sample_size(std::span<const double> log_weights) {
  check_log_weights(log_weights);
  LogSumExpAccumulator sum;
  LogSumExpAccumulator sum_sq;
  for (double v : log_weights) {
    sum.add(v);
    sum_sq.add(2.0 * v);
  }
  if (sum.value() == kNegInf) {
    throw Error(ErrorCode::kInvalidInput, "all weights are zero");
  }
  const double ess = std::exp(2.0 * sum.value() - sum_sq.value());
  return std::clamp(ess, 1.0, static_cast<double>(log_weights.size()));
}

EstimateSummary summarize_weights(const SmoothedWeights& weights, std::span<const double> h_values) {
  EstimateSummary out;
  out.estimate = self_normalized_estimate(weights.log_weights, h_values);
  out.ess = effective_sample_size(weights.log_weights);
  out.k_hat = weights.k_hat;
  out.diagnostic = diagnose(weights.k_hat);
  out.log_mean_weight =
      weights.log_scale + log_sum_exp(weights.log_weights) -
      std::log(static_cast<double>(weights.log_weights.size()));
  return out;
}

EstimateSummary estimate_with_diagnostics(const LogRatios& ratios, std::span<const double> h_values,
                                          Method method) {
  if (h_values.size() != ratios.size()) {
    throw Error(ErrorCode::kInvalidInput, "ratio and integrand lengths differ");
  }
  return summarize_weights(transform(ratios, method), h_values);
}

}  // namespace psis
