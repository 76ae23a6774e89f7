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

#include "psis/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "psis/error.hpp"
#include "psis/log_math.hpp"

namespace psis {

namespace {

bool is_exponential(double k) { return std::abs(k) < kShapeZeroTolerance; }

// k(b) = mean(log1p(b z)).
double profile_shape(std::span<const double> z, double b) {
  double sum = 0.0;
  for (double v : z) {
    sum += std::log1p(b * v);
  }
  return sum / static_cast<double>(z.size());
}

double mean_of(std::span<const double> z) {
  double sum = 0.0;
  for (double v : z) {
    sum += v;
  }
  return sum / static_cast<double>(z.size());
}

}  // namespace

double gpd_logpdf(const ParetoFit& fit, double y) {
  if (y < fit.u) {
    return kNegInf;
  }
  const double z = (y - fit.u) / fit.sigma;
  if (is_exponential(fit.k)) {
    return -std::log(fit.sigma) - z;
  }
  const double kz = fit.k * z;
  if (kz <= -1.0) {
    return kNegInf;
  }
  return -std::log(fit.sigma) - (1.0 / fit.k + 1.0) * std::log1p(kz);
}

double gpd_cdf(const ParetoFit& fit, double y) {
  if (y <= fit.u) {
    return 0.0;
  }
  const double z = (y - fit.u) / fit.sigma;
  if (is_exponential(fit.k)) {
    return -std::expm1(-z);
  }
  const double kz = fit.k * z;
  if (kz <= -1.0) {
    return 1.0;
  }
  return -std::expm1(-std::log1p(kz) / fit.k);
}

double gpd_quantile(const ParetoFit& fit, double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "gpd_quantile: probability must lie in [0, 1), got " +
                                              std::to_string(p));
  }
  const double log_survival = std::log1p(-p);
  if (is_exponential(fit.k)) {
    return fit.u - fit.sigma * log_survival;
  }
  return fit.u + fit.sigma / fit.k * std::expm1(-fit.k * log_survival);
}

std::vector<double> gpd_sample(const ParetoFit& fit, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine{seed};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};
  std::vector<double> draws(n);
  for (auto& d : draws) {
    d = gpd_quantile(fit, uniform(engine));
  }
  return draws;
}

double gpd_profile_log_likelihood(std::span<const double> exceedances, double b) {
  const double n = static_cast<double>(exceedances.size());
  const double k = profile_shape(exceedances, b);
  // b -> 0 limit: b / k(b) -> 1 / mean(z).
  const double ratio = (k == 0.0 || b == 0.0) ? 1.0 / mean_of(exceedances) : b / k;
  return n * (std::log(ratio) - k - 1.0);
}

std::vector<double> gpd_fit_grid(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const std::size_t m = 30 + static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  constexpr double kPriorScale = 3.0;
  // First quartile, 1-based index floor(n/4 + 0.5).
  const auto quartile_rank = static_cast<std::size_t>(std::floor(static_cast<double>(n) / 4.0 + 0.5));
  const double quartile = sorted[std::max<std::size_t>(quartile_rank, 1) - 1];
  const double max = sorted.back();

  std::vector<double> grid(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const double spread = std::sqrt(static_cast<double>(m) / (static_cast<double>(j) - 0.5)) - 1.0;
    grid[j - 1] = -1.0 / max + spread / (kPriorScale * quartile);
  }
  return grid;
}

ParetoFit gpd_fit(std::span<const double> exceedances) {
  const std::size_t n = exceedances.size();
  if (n < kMinTailSize) {
    throw Error(ErrorCode::kTailTooSmall,
                "gpd_fit: need at least 5 exceedances, got " + std::to_string(n));
  }
  for (double v : exceedances) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(ErrorCode::kInvalidInput, "gpd_fit: exceedances must be finite and positive");
    }
  }

  std::vector<double> copy;
  std::span<const double> z = exceedances;
  if (!std::is_sorted(z.begin(), z.end())) {
    copy.assign(z.begin(), z.end());
    std::sort(copy.begin(), copy.end());
    z = copy;
  }
  if (z.front() == z.back()) {
    throw Error(ErrorCode::kDegenerateTail, "gpd_fit: exceedances have zero variance");
  }

  const std::vector<double> grid = gpd_fit_grid(z);
  std::vector<double> log_lik(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    log_lik[j] = gpd_profile_log_likelihood(z, grid[j]);
  }
  const double log_norm = log_sum_exp(log_lik);

  double b_hat = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    b_hat += grid[j] * std::exp(log_lik[j] - log_norm);
  }

  ParetoFit fit;
  fit.u = 0.0;
  fit.k = profile_shape(z, b_hat);
  fit.sigma = (b_hat == 0.0 || fit.k == 0.0) ? mean_of(z) : fit.k / b_hat;
  fit.n_tail = n;
  return fit;
}

}  // namespace psis
