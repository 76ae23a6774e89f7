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

#include "psis/distributions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "psis/error.hpp"
#include "psis/log_math.hpp"

namespace psis {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) {
    throw Error(ErrorCode::kInvalidInput, what);
  }
}

bool all_positive(const std::vector<double>& v) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// log Gamma((nu+1)/2) - log Gamma(nu/2) - log(nu pi)/2.
double student_log_constant(double dof, double dim) {
  return std::lgamma((dof + dim) / 2.0) - std::lgamma(dof / 2.0) -
         dim / 2.0 * std::log(dof * std::numbers::pi);
}

// Precomputes the parts of a log density that do not depend on the point.
class DensityEvaluator {
 public:
  explicit DensityEvaluator(const DistSpec& spec) : spec_(spec) {
    validate(spec);
    std::visit(Overloaded{
                   [&](const Exponential& d) { constant_ = -std::log(d.scale); },
                   [&](const Normal& d) {
                     constant_ = -0.5 * std::log(2.0 * std::numbers::pi) - std::log(d.sd);
                   },
                   [&](const StudentT& d) {
                     constant_ = student_log_constant(d.dof, 1.0) - 0.5 * std::log(d.sq_scale);
                   },
                   [&](const MvNormal& d) {
                     const double dim = static_cast<double>(d.mean.size());
                     constant_ = -0.5 * dim * std::log(2.0 * std::numbers::pi);
                     inverse_.reserve(d.variances.size());
                     for (double v : d.variances) {
                       constant_ -= 0.5 * std::log(v);
                       inverse_.push_back(1.0 / v);
                     }
                   },
                   [&](const MvStudentT& d) {
                     constant_ = student_log_constant(d.dof, static_cast<double>(d.location.size()));
                     inverse_.reserve(d.sq_scales.size());
                     for (double v : d.sq_scales) {
                       constant_ -= 0.5 * std::log(v);
                       inverse_.push_back(1.0 / v);
                     }
                   },
               },
               spec_);
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != dimension(spec_)) {
      throw Error(ErrorCode::kInvalidInput, "point dimension " + std::to_string(x.size()) +
                                                " does not match distribution dimension " +
                                                std::to_string(dimension(spec_)));
    }
    return std::visit(
        Overloaded{
            [&](const Exponential& d) { return x[0] < 0.0 ? kNegInf : constant_ - x[0] / d.scale; },
            [&](const Normal& d) {
              const double z = (x[0] - d.mean) / d.sd;
              return constant_ - 0.5 * z * z;
            },
            [&](const StudentT& d) {
              const double z2 = (x[0] - d.location) * (x[0] - d.location) / d.sq_scale;
              return constant_ - 0.5 * (d.dof + 1.0) * std::log1p(z2 / d.dof);
            },
            [&](const MvNormal& d) {
              double q = 0.0;
              for (std::size_t j = 0; j < x.size(); ++j) {
                const double c = x[j] - d.mean[j];
                q += c * c * inverse_[j];
              }
              return constant_ - 0.5 * q;
            },
            [&](const MvStudentT& d) {
              double q = 0.0;
              for (std::size_t j = 0; j < x.size(); ++j) {
                const double c = x[j] - d.location[j];
                q += c * c * inverse_[j];
              }
              const double dim = static_cast<double>(x.size());
              return constant_ - 0.5 * (d.dof + dim) * std::log1p(q / d.dof);
            },
        },
        spec_);
  }

 private:
  const DistSpec& spec_;
  double constant_ = 0.0;
  std::vector<double> inverse_;
};

}  // namespace

void validate(const DistSpec& spec) {
  std::visit(Overloaded{
                 [](const Exponential& d) {
                   require(d.scale > 0.0 && std::isfinite(d.scale), "exponential scale must be positive");
                 },
                 [](const Normal& d) {
                   require(std::isfinite(d.mean), "normal mean must be finite");
                   require(d.sd > 0.0 && std::isfinite(d.sd), "normal sd must be positive");
                 },
                 [](const StudentT& d) {
                   require(d.dof > 0.0 && std::isfinite(d.dof), "student-t dof must be positive");
                   require(std::isfinite(d.location), "student-t location must be finite");
                   require(d.sq_scale > 0.0 && std::isfinite(d.sq_scale),
                           "student-t squared scale must be positive");
                 },
                 [](const MvNormal& d) {
                   require(!d.mean.empty(), "multivariate normal needs dimension >= 1");
                   require(d.mean.size() == d.variances.size(), "mean and variances differ in length");
                   require(all_finite(d.mean), "multivariate normal mean must be finite");
                   require(all_positive(d.variances), "variances must be positive");
                 },
                 [](const MvStudentT& d) {
                   require(d.dof > 0.0 && std::isfinite(d.dof), "student-t dof must be positive");
                   require(!d.location.empty(), "multivariate t needs dimension >= 1");
                   require(d.location.size() == d.sq_scales.size(),
                           "location and squared scales differ in length");
                   require(all_finite(d.location), "multivariate t location must be finite");
                   require(all_positive(d.sq_scales), "squared scales must be positive");
                 },
             },
             spec);
}

std::size_t dimension(const DistSpec& spec) {
  return std::visit(Overloaded{
                        [](const MvNormal& d) { return d.mean.size(); },
                        [](const MvStudentT& d) { return d.location.size(); },
                        [](const auto&) { return std::size_t{1}; },
                    },
                    spec);
}

std::vector<double> DrawMatrix::first_column() const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i] = data_[i * cols_];
  }
  return out;
}

DrawMatrix sample(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  if (n == 0) {
    throw Error(ErrorCode::kInvalidInput, "sample size must be at least 1");
  }
  std::mt19937_64 engine{seed};
  std::normal_distribution<double> standard_normal{0.0, 1.0};
  DrawMatrix draws(n, dimension(spec));

  std::visit(Overloaded{
                 [&](const Exponential& d) {
                   std::exponential_distribution<double> exp{1.0 / d.scale};
                   for (std::size_t i = 0; i < n; ++i) draws.row(i)[0] = exp(engine);
                 },
                 [&](const Normal& d) {
                   for (std::size_t i = 0; i < n; ++i) {
                     draws.row(i)[0] = d.mean + d.sd * standard_normal(engine);
                   }
                 },
                 [&](const StudentT& d) {
                   std::chi_squared_distribution<double> chi2{d.dof};
                   const double scale = std::sqrt(d.sq_scale);
                   for (std::size_t i = 0; i < n; ++i) {
                     const double z = standard_normal(engine);
                     draws.row(i)[0] = d.location + scale * z / std::sqrt(chi2(engine) / d.dof);
                   }
                 },
                 [&](const MvNormal& d) {
                   std::vector<double> sd(d.variances.size());
                   for (std::size_t j = 0; j < sd.size(); ++j) sd[j] = std::sqrt(d.variances[j]);
                   for (std::size_t i = 0; i < n; ++i) {
                     auto row = draws.row(i);
                     for (std::size_t j = 0; j < row.size(); ++j) {
                       row[j] = d.mean[j] + sd[j] * standard_normal(engine);
                     }
                   }
                 },
                 [&](const MvStudentT& d) {
                   std::chi_squared_distribution<double> chi2{d.dof};
                   std::vector<double> scale(d.sq_scales.size());
                   for (std::size_t j = 0; j < scale.size(); ++j) scale[j] = std::sqrt(d.sq_scales[j]);
                   for (std::size_t i = 0; i < n; ++i) {
                     const double mixing = 1.0 / std::sqrt(chi2(engine) / d.dof);
                     auto row = draws.row(i);
                     for (std::size_t j = 0; j < row.size(); ++j) {
                       row[j] = d.location[j] + scale[j] * mixing * standard_normal(engine);
                     }
                   }
                 },
             },
             spec);
  return draws;
}

double log_density(const DistSpec& spec, std::span<const double> x) { return DensityEvaluator{spec}(x); }

LogRatios log_ratio(const DistSpec& target, const DistSpec& proposal, const DrawMatrix& draws) {
  if (dimension(target) != dimension(proposal) || dimension(target) != draws.cols()) {
    throw Error(ErrorCode::kInvalidInput, "target, proposal and draws must share a dimension");
  }
  const DensityEvaluator log_p{target};
  const DensityEvaluator log_g{proposal};
  std::vector<double> out(draws.rows());
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    const double g = log_g(draws.row(i));
    if (g == kNegInf) {
      throw Error(ErrorCode::kInvalidInput,
                  "proposal density is zero at draw " + std::to_string(i) + "; it must dominate the target");
    }
    out[i] = log_p(draws.row(i)) - g;
  }
  return LogRatios{std::move(out)};
}

}  // namespace psis
