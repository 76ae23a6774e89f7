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

#ifndef PSIS_EXPERIMENTS_HPP
#define PSIS_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psis/distributions.hpp"
#include "psis/smoothing.hpp"

/**
 * \file
 * \brief Replication harness for the four toy importance-sampling problems.
 *
 * Toy 1: exponential proposal with mean 1, exponential target with mean theta, estimating
 *        the target mean; records estimate / theta.
 * Toy 2: N(0, 1) target, N(0, sigma^2) proposal.
 * Toy 3: t_21(0, 1) target, t_21(mu, 1 - 1/21) proposal.
 * Toy 4: N(0, I_d) target, joint t_21(0.4 * 1, 0.8 I_d) proposal.
 * Toys 2-4 estimate the normalizing-constant ratio (true value 1) and record its log.
 */

namespace psis {

enum class Integrand { kIdentity, kOne };

struct ToyProblem {
  DistSpec target;
  DistSpec proposal;
  Integrand integrand = Integrand::kOne;
  /// True value of the estimated quantity on its natural scale.
  double truth = 1.0;
  /// True value on the recorded scale (1 for toy 1 ratios, 0 for toys 2-4 logs).
  double recorded_truth = 0.0;
};

/// Throws Error(kInvalidInput) for toy ids outside 1..4 or invalid sweep values.
ToyProblem build_toy(int toy_id, double sweep_value);

/// The sweep each toy uses by default.
std::vector<double> default_sweep(int toy_id);

struct ToyConfig {
  int toy_id = 1;
  std::vector<double> sweep_values;
  std::size_t draws = 16000;
  std::size_t replications = 1000;
  std::vector<Method> methods = {Method::kRaw, Method::kTis, Method::kPsis};
  std::uint64_t base_seed = 0;
};

struct ReplicationRecord {
  int toy_id = 0;
  double sweep_value = 0.0;
  Method method = Method::kPsis;
  std::size_t replication = 0;
  double estimate = 0.0;
  std::optional<double> k_hat;
  double ess = 0.0;
};

/// Records ordered by sweep value (config order), then method (config order), then replication.
using ReplicationTable = std::vector<ReplicationRecord>;

/// Stable per-cell seed; independent of how many cells are run or in which order.
std::uint64_t cell_seed(std::uint64_t base_seed, int toy_id, double sweep_value, std::size_t replication);

/// Thread count 0 means std::thread::hardware_concurrency().
ReplicationTable run_toy(const ToyConfig& config, unsigned threads = 0);

struct CellSummary {
  double sweep_value = 0.0;
  Method method = Method::kPsis;
  std::size_t count = 0;
  double mean = 0.0;
  /// Population variance (divides by count), so rmse^2 = bias^2 + variance.
  double variance = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  std::optional<double> mean_k_hat;
  /// Mean absolute deviation of the estimate from the truth.
  double mean_abs_error = 0.0;
};

struct SummaryStats {
  std::vector<CellSummary> cells;

  /// Throws std::out_of_range if the cell is absent.
  const CellSummary& at(double sweep_value, Method method) const;
};

/// `truths` maps sweep value to the truth on the recorded scale.
SummaryStats summarize(const ReplicationTable& table, const std::map<double, double>& truths);

/// Linear-interpolation (type 7) quantile of unsorted values.
double sample_quantile(std::vector<double> values, double p);

/// Header toy_id,sweep_value,method,rep,estimate,k_hat,ess; undefined k_hat is written as NA.
void write_csv(std::ostream& out, const ReplicationTable& table);

/// {sweep_value: {method: {mean, var, bias, rmse, q05, q25, q50, q75, q95, mean_khat}}}.
nlohmann::json summary_to_json(const SummaryStats& stats);

/// Shortest round-trip decimal form, used for JSON keys and console summaries.
std::string format_number(double value);

/// 17 significant digits, used for data files.
std::string format_full(double value);

}  // namespace psis

#endif  // PSIS_EXPERIMENTS_HPP
