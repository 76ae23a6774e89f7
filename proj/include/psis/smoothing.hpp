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

#ifndef PSIS_SMOOTHING_HPP
#define PSIS_SMOOTHING_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "psis/gpd.hpp"

/**
 * \file
 * \brief Raw, truncated (TIS) and Pareto smoothed (PSIS) importance weights.
 *
 * All transforms take log importance ratios and return log weights normalized so that
 * their log-sum-exp is zero. `log_scale` recovers the input scale:
 * log_weights[s] + log_scale is the log of the transformed (unnormalized) weight.
 */

namespace psis {

enum class Method { kRaw, kTis, kPsis };

enum class Diagnostic { kOk, kWarnHalf, kWarnSevenTenths, kUndefined };

std::string_view to_string(Method method);
std::string_view to_string(Diagnostic level);

/// Parses "raw", "tis" or "psis" (case sensitive). Throws Error(kInvalidInput).
Method parse_method(std::string_view name);

/// Validated log importance ratios: nonempty, every value finite.
class LogRatios {
 public:
  explicit LogRatios(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct SmoothedWeights {
  std::vector<double> log_weights;
  std::optional<double> k_hat;
  /// Tail entries used for the shape estimate (and replaced, for PSIS); 0 when no fit.
  std::size_t m_tail = 0;
  /// Truncation level in the same normalized frame as log_weights; +inf for RAW.
  double truncation_bound_log = 0.0;
  Method method = Method::kPsis;
  double log_scale = 0.0;
  /// Tail fit in units of the threshold-anchored scale; present iff k_hat is.
  std::optional<ParetoFit> fit;
};

struct TransformOptions {
  /// Fit the tail for k_hat in RAW and TIS too. PSIS always fits.
  bool estimate_k_hat = true;
};

/// Result of the tail-replacement step, before truncation and normalization.
struct TailSmoothing {
  /// Input log ratios minus their maximum, with the tail replaced when smoothed.
  std::vector<double> log_weights;
  double max_log_ratio = 0.0;
  /// Log of the threshold u in the shifted frame; -inf when no tail was selected.
  double threshold_log = 0.0;
  /// The fit's exceedances are measured in units of exp(anchor_log) in the shifted frame.
  double anchor_log = 0.0;
  std::size_t m_tail = 0;
  std::optional<ParetoFit> fit;
  /// Draw indices of the smoothed tail in ascending rank order.
  std::vector<std::size_t> tail_indices;
};

/// floor(0.2 S).
std::size_t tail_length(std::size_t draws);

/**
 * Fits the GPD to the ratios above the (S - M)-th order statistic and replaces the z-th
 * smallest of them by F^-1((z - 1/2) / M). Values tied with the threshold stay on the
 * body side; ranks inside the tail break ties by draw index. If fewer than five strict
 * exceedances remain or the fit is degenerate, nothing is replaced and `fit` is empty.
 */
TailSmoothing smooth_tail(const LogRatios& ratios);

SmoothedWeights raw_transform(const LogRatios& ratios, const TransformOptions& options = {});

/// Caps every ratio at sqrt(S) times the mean ratio.
SmoothedWeights tis_transform(const LogRatios& ratios, const TransformOptions& options = {});

/// Tail smoothing followed by truncation at S^(3/4) times the mean smoothed weight.
/// Falls back to tis_transform (with k_hat undefined) when the tail cannot be fit.
SmoothedWeights psis_transform(const LogRatios& ratios);

SmoothedWeights transform(const LogRatios& ratios, Method method,
                          const TransformOptions& options = {});

/// OK for k <= 0.5, WARN_HALF for 0.5 < k <= 0.7, WARN_SEVEN_TENTHS above.
Diagnostic diagnose(std::optional<double> k_hat);

}  // namespace psis

#endif  // PSIS_SMOOTHING_HPP
