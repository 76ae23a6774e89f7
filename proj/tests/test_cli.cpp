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

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "psis/distributions.hpp"
#include "psis/experiments.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("psis_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    std::ofstream(path) << contents;
    return path;
  }

  fs::path write_columns(const std::string& name, const std::vector<double>& a, const std::vector<double>& b = {}) {
    std::ostringstream s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      s << psis::format_full(a[i]);
      if (!b.empty()) s << ' ' << psis::format_full(b[i]);
      s << '\n';
    }
    return write(name, s.str());
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), "psis");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return psis::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::vector<double> toy_one_log_ratios(double theta, std::size_t n, std::uint64_t seed) {
  const auto draws = psis::sample(psis::Exponential{1.0}, n, seed);
  const auto lr = psis::log_ratio(psis::Exponential{theta}, psis::Exponential{1.0}, draws);
  return {lr.values().begin(), lr.values().end()};
}

TEST_F(CliTest, ReadRatioFileReportsLineNumbers) {
  const auto bad = write("bad.txt", "0.5\n# comment\n\n1.0\nabc\n");
  try {
    psis::cli::read_ratio_file(bad);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":5:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(psis::cli::read_ratio_file(write("mixed.txt", "1 2\n3\n")), std::runtime_error);
  EXPECT_THROW(psis::cli::read_ratio_file(write("inf.txt", "1\ninf\n")), std::runtime_error);
  EXPECT_THROW(psis::cli::read_ratio_file(write("three.txt", "1 2 3\n")), std::runtime_error);
  EXPECT_THROW(psis::cli::read_ratio_file(write("empty.txt", "\n\n")), std::runtime_error);

  const auto ok = psis::cli::read_ratio_file(write("ok.txt", "1e-3  +2\n-4 5.5\n"));
  EXPECT_EQ(ok.log_ratios, (std::vector<double>{1e-3, -4}));
  EXPECT_EQ(ok.h_values, (std::vector<double>{2, 5.5}));
}

TEST_F(CliTest, SmoothEqualValues) {
  const auto input = write_columns("equal.txt", std::vector<double>(1000, 0.25));
  const auto output = dir_ / "weights.txt";
  EXPECT_EQ(run({"smooth", input.string(), "--out", output.string()}), 0);
  const auto weights = psis::cli::read_ratio_file(output);
  ASSERT_EQ(weights.log_ratios.size(), 1000u);
  for (double v : weights.log_ratios) EXPECT_NEAR(v, -std::log(1000.0), 1e-13);
  std::ifstream sidecar_file(output.string() + ".json");
  const json sidecar = json::parse(sidecar_file);
  EXPECT_EQ(sidecar["schema"], 1);
  EXPECT_TRUE(sidecar["k_hat"].is_null());
  EXPECT_EQ(sidecar["m_tail"], 0);
  EXPECT_EQ(sidecar["diagnostic"], "undefined");
  EXPECT_NEAR(sidecar["ess"].get<double>(), 1000.0, 1e-9);
}

TEST_F(CliTest, SmoothWarnsOnHeavyTail) {
  const auto input = write_columns("theta10.txt", toy_one_log_ratios(10.0, 16000, 3));
  EXPECT_EQ(run({"smooth", input.string(), "--out", (dir_ / "w.txt").string()}), 2);
  EXPECT_NE(err_.str().find("k_hat"), std::string::npos);
  // Without an output path everything goes to stdout as JSON.
  EXPECT_EQ(run({"smooth", input.string()}), 2);
  const json result = json::parse(out_.str());
  EXPECT_GT(result["k_hat"].get<double>(), 0.7);
  EXPECT_EQ(result["log_weights"].size(), 16000u);
  EXPECT_EQ(result["diagnostic"], "warn_seven_tenths");
}

TEST_F(CliTest, SmoothExitCodeForModerateTail) {
  const auto input = write_columns("theta13.txt", toy_one_log_ratios(1.3, 4000, 4));
  EXPECT_EQ(run({"smooth", input.string(), "--method", "tis"}), 0);
  const json result = json::parse(out_.str());
  EXPECT_EQ(result["method"], "tis");
  EXPECT_EQ(result["diagnostic"], "ok");
}

TEST_F(CliTest, SmoothMissingFile) {
  EXPECT_EQ(run({"smooth", (dir_ / "nope.txt").string()}), 1);
  EXPECT_NE(err_.str().find("cannot open"), std::string::npos);
}

TEST_F(CliTest, SmoothRejectsUnknownMethod) { EXPECT_EQ(run({"smooth", "x", "--method", "ips"}), 1); }

TEST_F(CliTest, EstimateExamples) {
  EXPECT_EQ(run({"estimate", write("a.txt", "0 1\n0 2\n0 3\n").string()}), 0);
  EXPECT_NEAR(json::parse(out_.str())["estimate"].get<double>(), 2.0, 1e-15);

  EXPECT_EQ(run({"estimate", write("b.txt", "0.3 1\n-2 1\n5 1\n").string()}), 0);
  EXPECT_EQ(json::parse(out_.str())["estimate"].get<double>(), 1.0);

  const auto two_rows = write_columns("c.txt", {0.0, std::log(3.0)}, {0.0, 2.0});
  EXPECT_EQ(run({"estimate", two_rows.string(), "--method", "raw"}), 0);
  const json result = json::parse(out_.str());
  EXPECT_NEAR(result["estimate"].get<double>(), 1.5, 1e-15);
  EXPECT_NEAR(result["ess"].get<double>(), 1.6, 1e-14);
  EXPECT_TRUE(result["k_hat"].is_null());
}

TEST_F(CliTest, EstimateNeedsTwoColumns) {
  EXPECT_EQ(run({"estimate", write("one.txt", "0\n1\n").string()}), 1);
}

TEST_F(CliTest, SmoothThenRawEstimateRoundTrip) {
  const auto lr = toy_one_log_ratios(2.1, 5000, 5);
  const auto draws = psis::sample(psis::Exponential{1.0}, 5000, 5).first_column();
  const auto input = write_columns("toy.txt", lr, draws);
  for (std::string method : {"psis", "tis", "raw"}) {
    const auto smoothed = dir_ / ("smoothed_" + method + ".txt");
    ASSERT_EQ(run({"smooth", input.string(), "--method", method, "--out", smoothed.string(), "--quiet"}), 0);
    ASSERT_EQ(run({"estimate", input.string(), "--method", method}), 0);
    const double direct = json::parse(out_.str())["estimate"].get<double>();
    ASSERT_EQ(run({"estimate", smoothed.string(), "--method", "raw"}), 0);
    const double via_file = json::parse(out_.str())["estimate"].get<double>();
    EXPECT_NEAR(via_file, direct, 1e-10) << method;
  }
}

TEST_F(CliTest, FitSubcommand) {
  const auto input = write_columns("theta3.txt", toy_one_log_ratios(3.0, 16000, 6));
  EXPECT_EQ(run({"fit", input.string()}), 0);
  const json result = json::parse(out_.str());
  EXPECT_EQ(result["m_tail"], 3200);
  EXPECT_NEAR(result["k_hat"].get<double>(), 2.0 / 3.0, 0.1);

  std::vector<double> exceed = psis::gpd_sample({0, 2, 0.4}, 3000, 1);
  std::erase_if(exceed, [](double v) { return v <= 0; });
  EXPECT_EQ(run({"fit", write_columns("exc.txt", exceed).string(), "--exceedances"}), 0);
  const json raw_fit = json::parse(out_.str());
  EXPECT_NEAR(raw_fit["k_hat"].get<double>(), 0.4, 0.1);
  EXPECT_NEAR(raw_fit["sigma"].get<double>(), 2.0, 0.3);
}

TEST_F(CliTest, ToyWritesCsvAndSummary) {
  const auto outdir = dir_ / "toy";
  EXPECT_EQ(run({"toy", "--toy", "1", "--sweep", "1.3", "--S", "1000", "--reps", "10", "--seed", "7", "--outdir",
                 outdir.string(), "--quiet"}),
            0);
  std::ifstream csv(outdir / "toy1.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line, "toy_id,sweep_value,method,rep,estimate,k_hat,ess");
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 30u);
  std::ifstream js(outdir / "toy1_summary.json");
  const json summary = json::parse(js);
  EXPECT_TRUE(summary["1.3"].contains("psis"));
  EXPECT_NE(out_.str().find("sweep=1.3"), std::string::npos);
}

TEST_F(CliTest, ToyDefaultSweep) {
  const auto outdir = dir_ / "toy2";
  EXPECT_EQ(run({"toy", "--toy", "2", "--S", "100", "--reps", "2", "--method", "psis", "--outdir", outdir.string(),
                 "--quiet"}),
            0);
  std::ifstream js(outdir / "toy2_summary.json");
  const json summary = json::parse(js);
  EXPECT_EQ(summary.size(), 8u);
  for (const char* key : {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8"}) EXPECT_TRUE(summary.contains(key));
}

TEST_F(CliTest, ToyRejectsInvalidFlags) {
  EXPECT_EQ(run({"toy", "--toy", "9"}), 1);
  EXPECT_NE(err_.str().find("Usage"), std::string::npos);
  EXPECT_EQ(run({"toy", "--toy", "1", "--S", "10"}), 1);
  EXPECT_EQ(run({"toy", "--toy", "4", "--sweep", "2.5", "--S", "100", "--reps", "1", "--outdir", dir_.string()}), 1);
  EXPECT_EQ(run({}), 1);
}

}  // namespace
