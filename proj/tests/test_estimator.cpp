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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "property.hpp"
#include "psis/error.hpp"
#include "psis/estimator.hpp"

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

TEST(SelfNormalizedEstimate, IdentityIntegrandIsOne) {
  const std::vector<double> lw = {-3.0, 0.5, 10.0, -200.0};
  EXPECT_EQ(psis::self_normalized_estimate(lw, std::vector<double>(4, 1.0)), 1.0);
}

TEST(SelfNormalizedEstimate, EqualWeightsGiveArithmeticMean) {
  EXPECT_NEAR(psis::self_normalized_estimate(std::vector<double>(3, -1.0), std::vector<double>{1, 2, 3}), 2.0,
              1e-15);
}

TEST(SelfNormalizedEstimate, HandComputed) {
  // (0 * 1 + 2 * 3) / (1 + 3)
  EXPECT_NEAR(psis::self_normalized_estimate(std::vector<double>{0.0, std::log(3.0)}, std::vector<double>{0, 2}),
              1.5, 1e-15);
}

TEST(SelfNormalizedEstimate, SignedIntegrand) {
  // (-4 * 1 + 1 * 3) / 4
  EXPECT_NEAR(psis::self_normalized_estimate(std::vector<double>{0.0, std::log(3.0)}, std::vector<double>{-4, 1}),
              -0.25, 1e-15);
}

TEST(SelfNormalizedEstimate, Errors) {
  EXPECT_THROW(psis::self_normalized_estimate(std::vector<double>{kNegInf, kNegInf}, std::vector<double>{1, 2}),
               psis::Error);
  EXPECT_THROW(psis::self_normalized_estimate(std::vector<double>{0.0}, std::vector<double>{1, 2}), psis::Error);
  EXPECT_THROW(psis::self_normalized_estimate(std::vector<double>{0.0}, std::vector<double>{std::nan("")}),
               psis::Error);
  EXPECT_THROW(psis::self_normalized_estimate(std::vector<double>{std::nan("")}, std::vector<double>{1}), psis::Error);
}

TEST(EffectiveSampleSize, Examples) {
  EXPECT_DOUBLE_EQ(psis::effective_sample_size(std::vector<double>(7, 2.5)), 7.0);
  EXPECT_DOUBLE_EQ(psis::effective_sample_size(std::vector<double>{0.0, kNegInf, kNegInf}), 1.0);
  EXPECT_NEAR(psis::effective_sample_size(std::vector<double>{0.0, std::log(3.0)}), 1.6, 1e-14);
  EXPECT_THROW(psis::effective_sample_size(std::vector<double>{kNegInf}), psis::Error);
}

TEST(EstimateWithDiagnostics, RawEqualRatios) {
  const auto summary =
      psis::estimate_with_diagnostics(psis::LogRatios{{1.0, 1.0}}, std::vector<double>{4, 4}, psis::Method::kRaw);
  EXPECT_DOUBLE_EQ(summary.estimate, 4.0);
  EXPECT_DOUBLE_EQ(summary.ess, 2.0);
  EXPECT_FALSE(summary.k_hat.has_value());
  EXPECT_EQ(summary.diagnostic, psis::Diagnostic::kUndefined);
  EXPECT_NEAR(summary.log_mean_weight, 1.0, 1e-15);
}

TEST(EstimateWithDiagnostics, LengthMismatch) {
  EXPECT_THROW(psis::estimate_with_diagnostics(psis::LogRatios{{1.0, 1.0}}, std::vector<double>{4}, psis::Method::kPsis),
               psis::Error);
}

TEST(EstimatorProperties, WeightScaleInvariance) {
  psis::testing::LogRatioGenerator gen{11};
  std::normal_distribution<double> normal{0.0, 3.0};
  std::uniform_real_distribution<double> shift{-500.0, 500.0};
  for (int trial = 0; trial < 2000; ++trial) {
    const auto lw = gen();
    std::vector<double> h(lw.size());
    for (auto& v : h) v = normal(gen.engine());
    auto scaled = lw;
    const double c = shift(gen.engine());
    for (auto& v : scaled) v += c;
    const double a = psis::self_normalized_estimate(lw, h);
    const double b = psis::self_normalized_estimate(scaled, h);
    ASSERT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
    ASSERT_NEAR(psis::effective_sample_size(lw), psis::effective_sample_size(scaled),
                1e-12 * static_cast<double>(lw.size()));
  }
}

TEST(EstimatorProperties, EssBounds) {
  psis::testing::LogRatioGenerator gen{12};
  for (int trial = 0; trial < 2000; ++trial) {
    const auto lw = gen();
    const double ess = psis::effective_sample_size(lw);
    ASSERT_GE(ess, 1.0);
    ASSERT_LE(ess, static_cast<double>(lw.size()));
    ASSERT_EQ(psis::self_normalized_estimate(lw, std::vector<double>(lw.size(), 1.0)), 1.0);
  }
}

TEST(EstimatorProperties, MatchesDirectScaleArithmetic) {
  std::mt19937_64 engine{13};
  std::uniform_real_distribution<double> log_w{-5.0, 5.0};
  std::normal_distribution<double> normal{0.0, 2.0};
  for (int trial = 0; trial < 5000; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>{1, 10}(engine);
    std::vector<double> lw(n), h(n);
    double num = 0.0, den = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lw[i] = log_w(engine);
      h[i] = normal(engine);
      const double w = std::exp(lw[i]);
      num += w * h[i];
      den += w;
      sq += w * w;
    }
    ASSERT_NEAR(psis::self_normalized_estimate(lw, h), num / den, 1e-10);
    ASSERT_NEAR(psis::effective_sample_size(lw), den * den / sq, 1e-10);
  }
}

}  // namespace
