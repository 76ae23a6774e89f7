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

#ifndef PSIS_TOOLS_CLI_HPP
#define PSIS_TOOLS_CLI_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "psis/smoothing.hpp"

namespace psis::cli {

/// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnstable = 2;

/// One log ratio per line, optionally followed by an integrand value.
/// Blank lines and lines starting with '#' are skipped.
struct RatioFile {
  std::vector<double> log_ratios;
  std::vector<double> h_values;  // empty for single-column files
  bool has_h() const { return !h_values.empty(); }
};

/// Throws std::runtime_error with a "path:line:" prefix on malformed input.
RatioFile read_ratio_file(const std::filesystem::path& path);

struct SmoothArgs {
  std::filesystem::path input;
  Method method = Method::kPsis;
  std::optional<std::filesystem::path> output;
  bool quiet = false;
};

struct EstimateArgs {
  std::filesystem::path input;
  Method method = Method::kPsis;
  bool quiet = false;
};

struct FitArgs {
  std::filesystem::path input;
  /// Treat the file as raw positive exceedances instead of log ratios.
  bool exceedances = false;
};

struct ToyArgs {
  int toy_id = 0;
  std::vector<double> sweep;  // empty: the toy's default sweep
  std::size_t draws = 16000;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  std::vector<Method> methods = {Method::kRaw, Method::kTis, Method::kPsis};
  std::filesystem::path outdir = ".";
  bool quiet = false;
};

int cmd_smooth(const SmoothArgs& args, std::ostream& out, std::ostream& err);
int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err);
int cmd_toy(const ToyArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psis::cli

#endif  // PSIS_TOOLS_CLI_HPP
