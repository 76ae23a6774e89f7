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

#include "psis/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "psis/error.hpp"
#include "psis/estimator.hpp"

namespace psis {

namespace {

constexpr double kToyDof = 21.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string to_chars_string(double value, std::chars_format format, int precision) {
  char buf[64];
  const auto result = precision < 0 ? std::to_chars(buf, buf + sizeof(buf), value)
                                    : std::to_chars(buf, buf + sizeof(buf), value, format, precision);
  return std::string(buf, result.ptr);
}

std::vector<ReplicationRecord> run_cell(const ToyConfig& config, const ToyProblem& problem,
                                        double sweep_value, std::size_t replication) {
  const std::uint64_t seed = cell_seed(config.base_seed, config.toy_id, sweep_value, replication);
  const DrawMatrix draws = sample(problem.proposal, config.draws, seed);
  const LogRatios ratios = log_ratio(problem.target, problem.proposal, draws);

  // One tail fit per cell; every method reports the same k_hat.
  const SmoothedWeights psis = psis_transform(ratios);
  std::vector<double> h;
  if (problem.integrand == Integrand::kIdentity) {
    h = draws.first_column();
  } else {
    h.assign(draws.rows(), 1.0);
  }

  std::vector<ReplicationRecord> out;
  out.reserve(config.methods.size());
  for (Method method : config.methods) {
    const SmoothedWeights weights =
        method == Method::kPsis ? psis : transform(ratios, method, TransformOptions{.estimate_k_hat = false});
    const EstimateSummary summary = summarize_weights(weights, h);
    ReplicationRecord record;
    record.toy_id = config.toy_id;
    record.sweep_value = sweep_value;
    record.method = method;
    record.replication = replication;
    record.estimate = problem.integrand == Integrand::kIdentity ? summary.estimate / problem.truth
                                                                : summary.log_mean_weight;
    record.k_hat = psis.k_hat;
    record.ess = summary.ess;
    out.push_back(record);
  }
  return out;
}

}  // namespace

ToyProblem build_toy(int toy_id, double sweep_value) {
  if (!std::isfinite(sweep_value)) {
    throw Error(ErrorCode::kInvalidInput, "sweep value must be finite");
  }
  ToyProblem problem;
  switch (toy_id) {
    case 1:
      if (!(sweep_value > 0.0)) throw Error(ErrorCode::kInvalidInput, "toy 1 needs theta > 0");
      problem.target = Exponential{sweep_value};
      problem.proposal = Exponential{1.0};
      problem.integrand = Integrand::kIdentity;
      problem.truth = sweep_value;
      problem.recorded_truth = 1.0;
      break;
    case 2:
      if (!(sweep_value > 0.0)) throw Error(ErrorCode::kInvalidInput, "toy 2 needs sigma > 0");
      problem.target = Normal{0.0, 1.0};
      problem.proposal = Normal{0.0, sweep_value};
      break;
    case 3:
      problem.target = StudentT{kToyDof, 0.0, 1.0};
      problem.proposal = StudentT{kToyDof, sweep_value, 1.0 - 1.0 / kToyDof};
      break;
    case 4: {
      if (!(sweep_value >= 1.0) || std::floor(sweep_value) != sweep_value) {
        throw Error(ErrorCode::kInvalidInput, "toy 4 needs a positive integer dimension");
      }
      const auto d = static_cast<std::size_t>(sweep_value);
      problem.target = MvNormal{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
      problem.proposal = MvStudentT{kToyDof, std::vector<double>(d, 0.4), std::vector<double>(d, 0.8)};
      break;
    }
    default:
      throw Error(ErrorCode::kInvalidInput, "unknown toy id " + std::to_string(toy_id) + " (expected 1-4)");
  }
  if (toy_id != 1) {
    problem.integrand = Integrand::kOne;
    problem.truth = 1.0;
    problem.recorded_truth = 0.0;
  }
  return problem;
}

std::vector<double> default_sweep(int toy_id) {
  switch (toy_id) {
    case 1:
      return {1.3, 1.5, 1.9, 2.0, 2.1, 3.0, 10.0};
    case 2:
      return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    case 3:
      return {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    case 4:
      return {1.0, 20.0, 40.0, 60.0, 80.0, 100.0};
    default:
      throw Error(ErrorCode::kInvalidInput, "unknown toy id " + std::to_string(toy_id) + " (expected 1-4)");
  }
}

std::uint64_t cell_seed(std::uint64_t base_seed, int toy_id, double sweep_value, std::size_t replication) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(toy_id));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(sweep_value + 0.0));
  h = splitmix64(h ^ static_cast<std::uint64_t>(replication));
  return h;
}

ReplicationTable run_toy(const ToyConfig& config, unsigned threads) {
  if (config.sweep_values.empty()) throw Error(ErrorCode::kInvalidInput, "sweep values must be nonempty");
  if (config.replications == 0) throw Error(ErrorCode::kInvalidInput, "replications must be at least 1");
  if (config.methods.empty()) throw Error(ErrorCode::kInvalidInput, "at least one method is required");
  if (config.draws < 25) {
    throw Error(ErrorCode::kInvalidInput, "at least 25 draws are required for a tail fit");
  }

  std::vector<ToyProblem> problems;
  problems.reserve(config.sweep_values.size());
  for (double v : config.sweep_values) {
    problems.push_back(build_toy(config.toy_id, v));
  }

  const std::size_t reps = config.replications;
  const std::size_t cells = problems.size() * reps;
  std::vector<std::vector<ReplicationRecord>> results(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (std::size_t cell = next++; cell < cells && !failed; cell = next++) {
      const std::size_t sweep = cell / reps;
      const std::size_t rep = cell % reps;
      try {
        results[cell] = run_cell(config, problems[sweep], config.sweep_values[sweep], rep);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ReplicationTable table;
  table.reserve(cells * config.methods.size());
  for (std::size_t sweep = 0; sweep < problems.size(); ++sweep) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      for (std::size_t rep = 0; rep < reps; ++rep) {
        table.push_back(results[sweep * reps + rep][m]);
      }
    }
  }
  return table;
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::kInvalidInput, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const CellSummary& SummaryStats::at(double sweep_value, Method method) const {
  for (const auto& c : cells) {
    if (c.sweep_value == sweep_value && c.method == method) return c;
  }
  throw std::out_of_range("no summary cell for sweep " + format_number(sweep_value) + " method " +
                          std::string(to_string(method)));
}

SummaryStats summarize(const ReplicationTable& table, const std::map<double, double>& truths) {
  if (table.empty()) throw Error(ErrorCode::kInvalidInput, "cannot summarize an empty table");

  // Cells in first-appearance order.
  std::vector<std::pair<double, Method>> keys;
  std::vector<std::vector<const ReplicationRecord*>> members;
  for (const auto& r : table) {
    auto it = std::find(keys.begin(), keys.end(), std::pair{r.sweep_value, r.method});
    if (it == keys.end()) {
      keys.emplace_back(r.sweep_value, r.method);
      members.emplace_back();
      it = keys.end() - 1;
    }
    members[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
  }

  SummaryStats stats;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    const auto truth_it = truths.find(keys[c].first);
    if (truth_it == truths.end()) {
      throw Error(ErrorCode::kInvalidInput, "no truth given for sweep value " + format_number(keys[c].first));
    }
    const double truth = truth_it->second;
    const auto& rows = members[c];
    const double n = static_cast<double>(rows.size());

    std::vector<double> estimates;
    estimates.reserve(rows.size());
    double sum = 0.0;
    double abs_err = 0.0;
    double k_sum = 0.0;
    std::size_t k_count = 0;
    for (const auto* r : rows) {
      estimates.push_back(r->estimate);
      sum += r->estimate;
      abs_err += std::abs(r->estimate - truth);
      if (r->k_hat) {
        k_sum += *r->k_hat;
        ++k_count;
      }
    }
    CellSummary cell;
    cell.sweep_value = keys[c].first;
    cell.method = keys[c].second;
    cell.count = rows.size();
    cell.mean = sum / n;
    double sq = 0.0;
    for (double e : estimates) sq += (e - cell.mean) * (e - cell.mean);
    cell.variance = sq / n;
    cell.bias = cell.mean - truth;
    cell.rmse = std::sqrt(cell.bias * cell.bias + cell.variance);
    cell.mean_abs_error = abs_err / n;
    std::sort(estimates.begin(), estimates.end());
    cell.q05 = sample_quantile(estimates, 0.05);
    cell.q25 = sample_quantile(estimates, 0.25);
    cell.q50 = sample_quantile(estimates, 0.50);
    cell.q75 = sample_quantile(estimates, 0.75);
    cell.q95 = sample_quantile(estimates, 0.95);
    if (k_count > 0) cell.mean_k_hat = k_sum / static_cast<double>(k_count);
    stats.cells.push_back(cell);
  }
  return stats;
}

std::string format_number(double value) { return to_chars_string(value, std::chars_format::general, -1); }

std::string format_full(double value) { return to_chars_string(value, std::chars_format::general, 17); }

void write_csv(std::ostream& out, const ReplicationTable& table) {
  out << "toy_id,sweep_value,method,rep,estimate,k_hat,ess\n";
  for (const auto& r : table) {
    out << r.toy_id << ',' << format_full(r.sweep_value) << ',' << to_string(r.method) << ','
        << r.replication << ',' << format_full(r.estimate) << ','
        << (r.k_hat ? format_full(*r.k_hat) : std::string("NA")) << ',' << format_full(r.ess) << '\n';
  }
}

nlohmann::json summary_to_json(const SummaryStats& stats) {
  nlohmann::json root = nlohmann::json::object();
  for (const auto& c : stats.cells) {
    nlohmann::json cell = {
        {"n", c.count},   {"mean", c.mean}, {"var", c.variance}, {"bias", c.bias}, {"rmse", c.rmse},
        {"q05", c.q05},   {"q25", c.q25},   {"q50", c.q50},      {"q75", c.q75},   {"q95", c.q95},
    };
    cell["mean_khat"] = c.mean_k_hat ? nlohmann::json(*c.mean_k_hat) : nlohmann::json(nullptr);
    root[format_number(c.sweep_value)][std::string(to_string(c.method))] = std::move(cell);
  }
  return root;
}

}  // namespace psis
