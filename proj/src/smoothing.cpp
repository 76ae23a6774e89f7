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

#include "psis/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "psis/error.hpp"
#include "psis/log_math.hpp"

namespace psis {

namespace {

// Exceedances are expressed relative to exp(anchor); keeping the anchor at or above this
// bounds exp(log weight - anchor) by exp(700) once the maximum has been shifted to 0.
constexpr double kLowestAnchor = -700.0;

SmoothedWeights finalize(std::vector<double> shifted, double max_log_ratio, double bound_log,
                         Method method) {
  const double norm = log_sum_exp(shifted);
  for (auto& v : shifted) {
    v -= norm;
  }
  SmoothedWeights out;
  out.log_weights = std::move(shifted);
  out.truncation_bound_log = bound_log - norm;
  out.method = method;
  out.log_scale = max_log_ratio + norm;
  return out;
}

std::vector<double> shifted_copy(const LogRatios& ratios, double* max_out) {
  const auto values = ratios.values();
  const double max = *std::max_element(values.begin(), values.end());
  std::vector<double> shifted(values.size());
  std::transform(values.begin(), values.end(), shifted.begin(), [max](double v) { return v - max; });
  *max_out = max;
  return shifted;
}

void attach_k_hat(SmoothedWeights& out, const TailSmoothing& tail) {
  if (tail.fit) {
    out.k_hat = tail.fit->k;
    out.fit = tail.fit;
    out.m_tail = tail.m_tail;
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kRaw:
      return "raw";
    case Method::kTis:
      return "tis";
    case Method::kPsis:
      return "psis";
  }
  return "unknown";
}

std::string_view to_string(Diagnostic level) {
  switch (level) {
    case Diagnostic::kOk:
      return "ok";
    case Diagnostic::kWarnHalf:
      return "warn_half";
    case Diagnostic::kWarnSevenTenths:
      return "warn_seven_tenths";
    case Diagnostic::kUndefined:
      return "undefined";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "raw") return Method::kRaw;
  if (name == "tis") return Method::kTis;
  if (name == "psis") return Method::kPsis;
  throw Error(ErrorCode::kInvalidInput, "unknown method '" + std::string(name) + "'");
}

LogRatios::LogRatios(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "log ratios must be nonempty");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kInvalidInput,
                  "log ratio at index " + std::to_string(i) + " is not finite");
    }
  }
}

std::size_t tail_length(std::size_t draws) { return draws / 5; }

TailSmoothing smooth_tail(const LogRatios& ratios) {
  TailSmoothing out;
  out.log_weights = shifted_copy(ratios, &out.max_log_ratio);
  out.threshold_log = kNegInf;
  auto& lw = out.log_weights;

  const std::size_t draws = lw.size();
  const std::size_t m = tail_length(draws);
  if (m < kMinTailSize) {
    return out;
  }

  std::vector<std::size_t> order(draws);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_value_then_index = [&lw](std::size_t a, std::size_t b) {
    return lw[a] < lw[b] || (lw[a] == lw[b] && a < b);
  };
  const auto cut = order.begin() + static_cast<std::ptrdiff_t>(draws - m - 1);
  std::nth_element(order.begin(), cut, order.end(), by_value_then_index);
  std::sort(cut + 1, order.end(), by_value_then_index);

  const double threshold = lw[*cut];
  out.threshold_log = threshold;
  auto first_exceedance =
      std::find_if(cut + 1, order.end(), [&](std::size_t i) { return lw[i] > threshold; });
  std::vector<std::size_t> tail(first_exceedance, order.end());
  if (tail.size() < kMinTailSize) {
    return out;
  }

  const double anchor = std::max(threshold, kLowestAnchor);
  const bool anchored_at_threshold = anchor == threshold;
  out.anchor_log = anchor;
  const double threshold_rel = std::exp(threshold - anchor);
  std::vector<double> exceedances(tail.size());
  for (std::size_t r = 0; r < tail.size(); ++r) {
    const double v = lw[tail[r]];
    const double z = anchored_at_threshold ? std::expm1(v - threshold) : std::exp(v - anchor) - threshold_rel;
    if (!(z > 0.0) || !std::isfinite(z)) {
      return out;
    }
    exceedances[r] = z;
  }

  ParetoFit fit;
  try {
    fit = gpd_fit(exceedances);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidInput) {
      throw;
    }
    return out;
  }

  const double count = static_cast<double>(tail.size());
  for (std::size_t r = 0; r < tail.size(); ++r) {
    const double q = gpd_quantile(fit, (static_cast<double>(r) + 0.5) / count);
    lw[tail[r]] = anchored_at_threshold ? threshold + std::log1p(q) : anchor + std::log(threshold_rel + q);
  }
  out.m_tail = tail.size();
  out.fit = fit;
  out.tail_indices = std::move(tail);
  return out;
}

SmoothedWeights raw_transform(const LogRatios& ratios, const TransformOptions& options) {
  double max = 0.0;
  auto shifted = shifted_copy(ratios, &max);
  auto out = finalize(std::move(shifted), max, std::numeric_limits<double>::infinity(), Method::kRaw);
  if (options.estimate_k_hat) {
    attach_k_hat(out, smooth_tail(ratios));
  }
  return out;
}

SmoothedWeights tis_transform(const LogRatios& ratios, const TransformOptions& options) {
  double max = 0.0;
  auto lw = shifted_copy(ratios, &max);
  const double log_draws = std::log(static_cast<double>(lw.size()));
  // log(sqrt(S) * mean(r)) in the shifted frame.
  const double bound = 0.5 * log_draws + log_sum_exp(lw) - log_draws;
  for (auto& v : lw) {
    v = std::min(v, bound);
  }
  auto out = finalize(std::move(lw), max, bound, Method::kTis);
  if (options.estimate_k_hat) {
    attach_k_hat(out, smooth_tail(ratios));
  }
  return out;
}

SmoothedWeights psis_transform(const LogRatios& ratios) {
  TailSmoothing tail = smooth_tail(ratios);
  if (!tail.fit) {
    return tis_transform(ratios, TransformOptions{.estimate_k_hat = false});
  }
  auto& lw = tail.log_weights;
  const double log_draws = std::log(static_cast<double>(lw.size()));
  const double bound = 0.75 * log_draws + log_sum_exp(lw) - log_draws;
  for (auto& v : lw) {
    v = std::min(v, bound);
  }
  auto out = finalize(std::move(lw), tail.max_log_ratio, bound, Method::kPsis);
  attach_k_hat(out, tail);
  return out;
}

SmoothedWeights transform(const LogRatios& ratios, Method method, const TransformOptions& options) {
  switch (method) {
    case Method::kRaw:
      return raw_transform(ratios, options);
    case Method::kTis:
      return tis_transform(ratios, options);
    case Method::kPsis:
      return psis_transform(ratios);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown method");
}

Diagnostic diagnose(std::optional<double> k_hat) {
  if (!k_hat || std::isnan(*k_hat)) {
    return Diagnostic::kUndefined;
  }
  if (*k_hat <= 0.5) {
    return Diagnostic::kOk;
  }
  if (*k_hat <= 0.7) {
    return Diagnostic::kWarnHalf;
  }
  return Diagnostic::kWarnSevenTenths;
}

}  // namespace psis
