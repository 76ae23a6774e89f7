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

#ifndef PSIS_GPD_HPP
#define PSIS_GPD_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

/**
 * \file
 * \brief Generalized Pareto distribution with threshold u, scale sigma and shape k.
 *
 * Density for k != 0 is (1/sigma) (1 + k (y - u) / sigma)^(-1/k - 1) on y > u, and
 * (1/sigma) exp(-(y - u) / sigma) for k = 0. Positive k means a heavy (power-law) tail;
 * negative k gives a bounded support with upper end u - sigma / k.
 */

namespace psis {

/// Shapes with |k| below this are evaluated with the exponential (k = 0) formulas.
inline constexpr double kShapeZeroTolerance = 1e-8;

/// Smallest tail accepted by gpd_fit.
inline constexpr std::size_t kMinTailSize = 5;

struct ParetoFit {
  double u = 0.0;
  double sigma = 1.0;
  double k = 0.0;
  /// Number of exceedances the parameters were estimated from (0 for hand-built fits).
  std::size_t n_tail = 0;
};

double gpd_logpdf(const ParetoFit& fit, double y);

double gpd_cdf(const ParetoFit& fit, double y);

/// Inverse CDF. Throws Error(kInvalidInput) unless 0 <= p < 1.
double gpd_quantile(const ParetoFit& fit, double p);

/// Inverse-CDF draws from a seeded 64-bit Mersenne twister.
std::vector<double> gpd_sample(const ParetoFit& fit, std::size_t n, std::uint64_t seed);

/**
 * Zhang-Stephens empirical Bayes estimate of (sigma, k) from threshold exceedances.
 *
 * The fit works in the reparameterization b = k / sigma. For fixed b the likelihood is
 * maximized in closed form by k(b) = mean(log1p(b z)), which gives the profile
 * log-likelihood n (log(b / k(b)) - k(b) - 1). A grid of 30 + floor(sqrt(n)) values of b,
 * anchored at the sample maximum and first quartile, is weighted by exp(profile) and the
 * weighted mean of b is plugged back in.
 *
 * \param exceedances Strictly positive, finite values; sorted ascending is the fast path,
 *                    otherwise a sorted copy is made.
 * \return Fit with u = 0 and n_tail = exceedances.size().
 * \throws Error kTailTooSmall (< 5 values), kDegenerateTail (zero variance), kInvalidInput.
 */
ParetoFit gpd_fit(std::span<const double> exceedances);

/// Profile log-likelihood in b used by gpd_fit. Requires 1 + b z > 0 for every z.
double gpd_profile_log_likelihood(std::span<const double> exceedances, double b);

/// Grid of b values gpd_fit integrates over; `sorted` must be ascending.
std::vector<double> gpd_fit_grid(std::span<const double> sorted);

}  // namespace psis

#endif  // PSIS_GPD_HPP
