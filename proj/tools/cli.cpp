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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "psis/error.hpp"
#include "psis/estimator.hpp"
#include "psis/experiments.hpp"
#include "psis/gpd.hpp"

namespace psis::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool parse_double(std::string_view token, double* out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc{} && ptr == last;
}

void warn_if_unstable(Diagnostic level, const std::optional<double>& k_hat, std::ostream& err) {
  if (level == Diagnostic::kWarnSevenTenths) {
    err << "warning: k_hat = " << format_number(*k_hat)
        << " exceeds 0.7; importance sampling estimates may be unstable\n";
  }
}

int exit_for(Diagnostic level) { return level == Diagnostic::kWarnSevenTenths ? kExitUnstable : kExitOk; }

}  // namespace

RatioFile read_ratio_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path.string() + ": cannot open file");
  }
  RatioFile file;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      if (values.empty() && token.front() == '#') break;
      double v = 0.0;
      if (!parse_double(token, &v) || !std::isfinite(v)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": '" + token +
                                 "' is not a finite number");
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (values.size() > 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 1 or 2 columns, got " +
                               std::to_string(values.size()));
    }
    if (columns == 0) {
      columns = values.size();
    } else if (values.size() != columns) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(columns) + " columns, got " + std::to_string(values.size()));
    }
    file.log_ratios.push_back(values[0]);
    if (columns == 2) file.h_values.push_back(values[1]);
  }
  if (file.log_ratios.empty()) {
    throw std::runtime_error(path.string() + ": no data lines");
  }
  return file;
}

int cmd_smooth(const SmoothArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const RatioFile file = read_ratio_file(args.input);
    const SmoothedWeights weights = transform(LogRatios{file.log_ratios}, args.method);
    const Diagnostic level = diagnose(weights.k_hat);
    json sidecar = {
        {"schema", kSchemaVersion},
        {"method", std::string(to_string(weights.method))},
        {"k_hat", optional_number(weights.k_hat)},
        {"m_tail", weights.m_tail},
        {"diagnostic", std::string(to_string(level))},
        {"ess", effective_sample_size(weights.log_weights)},
    };

    if (args.output) {
      std::ofstream data(*args.output);
      if (!data) throw std::runtime_error(args.output->string() + ": cannot open for writing");
      for (std::size_t s = 0; s < weights.log_weights.size(); ++s) {
        data << format_full(weights.log_weights[s]);
        if (file.has_h()) data << ' ' << format_full(file.h_values[s]);
        data << '\n';
      }
      const std::filesystem::path sidecar_path = args.output->string() + ".json";
      std::ofstream meta(sidecar_path);
      if (!meta) throw std::runtime_error(sidecar_path.string() + ": cannot open for writing");
      meta << sidecar.dump(2) << '\n';
      if (!args.quiet) {
        err << "wrote " << weights.log_weights.size() << " log weights to " << args.output->string() << '\n';
      }
    } else {
      sidecar["log_weights"] = weights.log_weights;
      out << sidecar.dump() << '\n';
    }
    warn_if_unstable(level, weights.k_hat, err);
    return exit_for(level);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const RatioFile file = read_ratio_file(args.input);
    if (!file.has_h()) {
      throw std::runtime_error(args.input.string() + ": estimate needs a second column of integrand values");
    }
    const EstimateSummary summary = estimate_with_diagnostics(LogRatios{file.log_ratios}, file.h_values, args.method);
    const json result = {
        {"schema", kSchemaVersion},
        {"method", std::string(to_string(args.method))},
        {"estimate", summary.estimate},
        {"k_hat", optional_number(summary.k_hat)},
        {"ess", summary.ess},
        {"diagnostic", std::string(to_string(summary.diagnostic))},
    };
    out << result.dump() << '\n';
    warn_if_unstable(summary.diagnostic, summary.k_hat, err);
    return exit_for(summary.diagnostic);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const RatioFile file = read_ratio_file(args.input);
    json result = {{"schema", kSchemaVersion}};
    if (args.exceedances) {
      const ParetoFit fit = gpd_fit(file.log_ratios);
      result["k_hat"] = fit.k;
      result["sigma"] = fit.sigma;
      result["n_tail"] = fit.n_tail;
      result["diagnostic"] = std::string(to_string(diagnose(fit.k)));
      out << result.dump() << '\n';
      return kExitOk;
    }
    const TailSmoothing tail = smooth_tail(LogRatios{file.log_ratios});
    const std::optional<double> k_hat = tail.fit ? std::optional<double>(tail.fit->k) : std::nullopt;
    const Diagnostic level = diagnose(k_hat);
    result["k_hat"] = optional_number(k_hat);
    result["m_tail"] = tail.m_tail;
    result["log_threshold"] = optional_number(
        std::isfinite(tail.threshold_log) ? std::optional<double>(tail.threshold_log + tail.max_log_ratio)
                                          : std::nullopt);
    result["log_sigma"] = optional_number(
        tail.fit ? std::optional<double>(std::log(tail.fit->sigma) + tail.anchor_log + tail.max_log_ratio)
                 : std::nullopt);
    result["diagnostic"] = std::string(to_string(level));
    out << result.dump() << '\n';
    warn_if_unstable(level, k_hat, err);
    return exit_for(level);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_toy(const ToyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ToyConfig config;
    config.toy_id = args.toy_id;
    config.sweep_values = args.sweep.empty() ? default_sweep(args.toy_id) : args.sweep;
    config.draws = args.draws;
    config.replications = args.replications;
    config.methods = args.methods;
    config.base_seed = args.seed;

    const ReplicationTable table = run_toy(config);
    std::map<double, double> truths;
    for (double v : config.sweep_values) truths[v] = build_toy(config.toy_id, v).recorded_truth;
    const SummaryStats stats = summarize(table, truths);

    std::filesystem::create_directories(args.outdir);
    const auto stem = "toy" + std::to_string(config.toy_id);
    const auto csv_path = args.outdir / (stem + ".csv");
    const auto json_path = args.outdir / (stem + "_summary.json");
    {
      std::ofstream csv(csv_path);
      if (!csv) throw std::runtime_error(csv_path.string() + ": cannot open for writing");
      write_csv(csv, table);
    }
    {
      std::ofstream js(json_path);
      if (!js) throw std::runtime_error(json_path.string() + ": cannot open for writing");
      js << summary_to_json(stats).dump(2) << '\n';
    }

    for (double v : config.sweep_values) {
      out << "toy " << config.toy_id << " sweep=" << format_number(v);
      std::optional<double> k_hat;
      for (Method m : config.methods) {
        const CellSummary& c = stats.at(v, m);
        out << " | " << to_string(m) << " mean=" << format_number(c.mean) << " var=" << format_number(c.variance);
        k_hat = c.mean_k_hat;
      }
      out << " | mean_khat=" << (k_hat ? format_number(*k_hat) : std::string("NA")) << '\n';
    }
    if (!args.quiet) {
      err << "wrote " << table.size() << " records to " << csv_path.string() << " and " << json_path.string()
          << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pareto smoothed importance sampling"};
  app.require_subcommand(1);
  const std::vector<std::string> method_names = {"raw", "tis", "psis"};

  SmoothArgs smooth;
  std::string smooth_method = "psis";
  std::string smooth_out;
  auto* smooth_cmd = app.add_subcommand("smooth", "Transform log ratios into log weights");
  smooth_cmd->add_option("input", smooth.input, "File of log ratios (optional second column: h)")->required();
  smooth_cmd->add_option("--method", smooth_method, "raw, tis or psis")->check(CLI::IsMember(method_names));
  smooth_cmd->add_option("--out,-o", smooth_out, "Write log weights here and metadata to <out>.json");
  smooth_cmd->add_flag("--quiet,-q", smooth.quiet);

  EstimateArgs estimate;
  std::string estimate_method = "psis";
  auto* estimate_cmd = app.add_subcommand("estimate", "Self-normalized estimate of E[h]");
  estimate_cmd->add_option("input", estimate.input, "Two-column file: log ratio, h")->required();
  estimate_cmd->add_option("--method", estimate_method, "raw, tis or psis")->check(CLI::IsMember(method_names));
  estimate_cmd->add_flag("--quiet,-q", estimate.quiet);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Tail shape estimate for log ratios or raw exceedances");
  fit_cmd->add_option("input", fit.input, "File of log ratios, or exceedances with --exceedances")->required();
  fit_cmd->add_flag("--exceedances", fit.exceedances, "Input holds positive exceedances over a threshold");

  ToyArgs toy;
  std::vector<std::string> toy_methods;
  std::string outdir = ".";
  auto* toy_cmd = app.add_subcommand("toy", "Run a toy replication study");
  toy_cmd->add_option("--toy", toy.toy_id, "Toy problem 1-4")->required()->check(CLI::Range(1, 4));
  toy_cmd->add_option("--sweep", toy.sweep, "Comma-separated sweep values")->delimiter(',');
  toy_cmd->add_option("--S", toy.draws, "Draws per replication")->check(CLI::Range(std::size_t{25}, std::size_t{1} << 32));
  toy_cmd->add_option("--reps", toy.replications, "Replications per sweep value")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  toy_cmd->add_option("--seed", toy.seed, "Base seed");
  toy_cmd->add_option("--method", toy_methods, "Methods to run (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(method_names));
  toy_cmd->add_option("--outdir,--out", outdir, "Directory for the CSV and JSON outputs");
  toy_cmd->add_flag("--quiet,-q", toy.quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    // Usage of the failing subcommand when one was selected.
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kExitError;
  }

  if (*smooth_cmd) {
    smooth.method = parse_method(smooth_method);
    if (!smooth_out.empty()) smooth.output = smooth_out;
    return cmd_smooth(smooth, out, err);
  }
  if (*estimate_cmd) {
    estimate.method = parse_method(estimate_method);
    return cmd_estimate(estimate, out, err);
  }
  if (*fit_cmd) {
    return cmd_fit(fit, out, err);
  }
  if (!toy_methods.empty()) {
    toy.methods.clear();
    for (const auto& m : toy_methods) toy.methods.push_back(parse_method(m));
  }
  toy.outdir = outdir;
  return cmd_toy(toy, out, err);
}

}  // namespace psis::cli
