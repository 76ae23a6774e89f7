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

#ifndef PSIS_ESTIMATOR_HPP
#define PSIS_ESTIMATOR_HPP

#include <optional>
#include <span>

#include "psis/smoothing.hpp"

namespace psis {

/**
 * Self-normalized estimate sum(h w) / sum(w) from log weights.
 *
 * Log weights may be -inf (zero weight) but not NaN or +inf. The numerator is split into
 * the positive and negative parts of h, each accumulated as a log-sum, so h may take any
 * sign. Throws Error(kInvalidInput) on length mismatch, non-finite h, or all-zero weights.
 */
double self_normalized_estimate(std::span<const double> log_weights, std::span<const double> h_values);

/// Kong-Liu-Wong effective sample size (sum w)^2 / sum w^2, clamped to [1, S].
double effective_sample_size(std::span<const double> log_weights);

struct EstimateSummary {
  double estimate = 0.0;
  double ess = 0.0;
  std::optional<double> k_hat;
  Diagnostic diagnostic = Diagnostic::kUndefined;
  /// log of the mean transformed weight on the input scale, log((1/S) sum w_s).
  /// With normalized target and proposal this estimates the log normalizing-constant ratio.
  double log_mean_weight = 0.0;
};

EstimateSummary estimate_with_diagnostics(const LogRatios& ratios, std::span<const double> h_values,
                                          Method method);

/// Same summary for weights that were already transformed.
EstimateSummary summarize_weights(const SmoothedWeights& weights, std::span<const double> h_values);

}  // namespace psis

#endif  // PSIS_ESTIMATOR_HPP
