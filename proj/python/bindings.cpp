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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "psis/error.hpp"
#include "psis/estimator.hpp"
#include "psis/experiments.hpp"
#include "psis/gpd.hpp"
#include "psis/smoothing.hpp"

namespace py = pybind11;

namespace {

psis::LogRatios to_ratios(std::vector<double> values) { return psis::LogRatios{std::move(values)}; }

}  // namespace

PYBIND11_MODULE(_psis, m) {
  m.doc() = "Pareto smoothed importance sampling";

  py::register_exception<psis::Error>(m, "Error", PyExc_ValueError);

  py::enum_<psis::Method>(m, "Method")
      .value("RAW", psis::Method::kRaw)
      .value("TIS", psis::Method::kTis)
      .value("PSIS", psis::Method::kPsis);

  py::enum_<psis::Diagnostic>(m, "Diagnostic")
      .value("OK", psis::Diagnostic::kOk)
      .value("WARN_HALF", psis::Diagnostic::kWarnHalf)
      .value("WARN_SEVEN_TENTHS", psis::Diagnostic::kWarnSevenTenths)
      .value("UNDEFINED", psis::Diagnostic::kUndefined);

  py::class_<psis::ParetoFit>(m, "ParetoFit")
      .def(py::init([](double u, double sigma, double k) { return psis::ParetoFit{u, sigma, k, 0}; }),
           py::arg("u") = 0.0, py::arg("sigma") = 1.0, py::arg("k") = 0.0)
      .def_readwrite("u", &psis::ParetoFit::u)
      .def_readwrite("sigma", &psis::ParetoFit::sigma)
      .def_readwrite("k", &psis::ParetoFit::k)
      .def_readonly("n_tail", &psis::ParetoFit::n_tail)
      .def("__repr__", [](const psis::ParetoFit& f) {
        return "ParetoFit(u=" + psis::format_number(f.u) + ", sigma=" + psis::format_number(f.sigma) +
               ", k=" + psis::format_number(f.k) + ")";
      });

  py::class_<psis::SmoothedWeights>(m, "SmoothedWeights")
      .def_readonly("log_weights", &psis::SmoothedWeights::log_weights)
      .def_readonly("k_hat", &psis::SmoothedWeights::k_hat)
      .def_readonly("m_tail", &psis::SmoothedWeights::m_tail)
      .def_readonly("truncation_bound_log", &psis::SmoothedWeights::truncation_bound_log)
      .def_readonly("method", &psis::SmoothedWeights::method)
      .def_readonly("log_scale", &psis::SmoothedWeights::log_scale);

  py::class_<psis::EstimateSummary>(m, "EstimateSummary")
      .def_readonly("estimate", &psis::EstimateSummary::estimate)
      .def_readonly("ess", &psis::EstimateSummary::ess)
      .def_readonly("k_hat", &psis::EstimateSummary::k_hat)
      .def_readonly("diagnostic", &psis::EstimateSummary::diagnostic)
      .def_readonly("log_mean_weight", &psis::EstimateSummary::log_mean_weight);

  m.def("gpd_logpdf", &psis::gpd_logpdf, py::arg("fit"), py::arg("y"));
  m.def("gpd_cdf", &psis::gpd_cdf, py::arg("fit"), py::arg("y"));
  m.def("gpd_quantile", &psis::gpd_quantile, py::arg("fit"), py::arg("p"));
  m.def("gpd_sample", &psis::gpd_sample, py::arg("fit"), py::arg("n"), py::arg("seed"));
  m.def(
      "gpd_fit", [](const std::vector<double>& exceedances) { return psis::gpd_fit(exceedances); },
      py::arg("exceedances"));

  m.def("tail_length", &psis::tail_length, py::arg("draws"));
  m.def(
      "raw_transform", [](std::vector<double> lr) { return psis::raw_transform(to_ratios(std::move(lr))); },
      py::arg("log_ratios"));
  m.def(
      "tis_transform", [](std::vector<double> lr) { return psis::tis_transform(to_ratios(std::move(lr))); },
      py::arg("log_ratios"));
  m.def(
      "psis_transform", [](std::vector<double> lr) { return psis::psis_transform(to_ratios(std::move(lr))); },
      py::arg("log_ratios"));
  m.def(
      "transform",
      [](std::vector<double> lr, psis::Method method) { return psis::transform(to_ratios(std::move(lr)), method); },
      py::arg("log_ratios"), py::arg("method") = psis::Method::kPsis);
  m.def("diagnose", &psis::diagnose, py::arg("k_hat"));

  m.def(
      "self_normalized_estimate",
      [](const std::vector<double>& lw, const std::vector<double>& h) { return psis::self_normalized_estimate(lw, h); },
      py::arg("log_weights"), py::arg("h_values"));
  m.def(
      "effective_sample_size", [](const std::vector<double>& lw) { return psis::effective_sample_size(lw); },
      py::arg("log_weights"));
  m.def(
      "estimate_with_diagnostics",
      [](std::vector<double> lr, const std::vector<double>& h, psis::Method method) {
        return psis::estimate_with_diagnostics(to_ratios(std::move(lr)), h, method);
      },
      py::arg("log_ratios"), py::arg("h_values"), py::arg("method") = psis::Method::kPsis);

  m.def(
      "run_toy",
      [](int toy_id, std::vector<double> sweep, std::size_t draws, std::size_t reps, std::uint64_t seed) {
        psis::ToyConfig config;
        config.toy_id = toy_id;
        config.sweep_values = sweep.empty() ? psis::default_sweep(toy_id) : std::move(sweep);
        config.draws = draws;
        config.replications = reps;
        config.base_seed = seed;
        psis::ReplicationTable table;
        {
          py::gil_scoped_release release;
          table = psis::run_toy(config);
        }
        py::list rows;
        for (const auto& r : table) {
          py::dict row;
          row["toy_id"] = r.toy_id;
          row["sweep_value"] = r.sweep_value;
          row["method"] = std::string(psis::to_string(r.method));
          row["rep"] = r.replication;
          row["estimate"] = r.estimate;
          row["k_hat"] = r.k_hat;
          row["ess"] = r.ess;
          rows.append(std::move(row));
        }
        return rows;
      },
      py::arg("toy_id"), py::arg("sweep") = std::vector<double>{}, py::arg("draws") = 16000,
      py::arg("reps") = 1000, py::arg("seed") = 0,
      "Runs a toy study and returns one dict per (sweep value, method, replication).");

  m.def(
      "summarize_toy",
      [](int toy_id, std::vector<double> sweep, std::size_t draws, std::size_t reps, std::uint64_t seed) {
        psis::ToyConfig config;
        config.toy_id = toy_id;
        config.sweep_values = sweep.empty() ? psis::default_sweep(toy_id) : std::move(sweep);
        config.draws = draws;
        config.replications = reps;
        config.base_seed = seed;
        std::string dumped;
        {
          py::gil_scoped_release release;
          std::map<double, double> truths;
          for (double v : config.sweep_values) truths[v] = psis::build_toy(toy_id, v).recorded_truth;
          dumped = psis::summary_to_json(psis::summarize(psis::run_toy(config), truths)).dump();
        }
        return py::module_::import("json").attr("loads")(dumped);
      },
      py::arg("toy_id"), py::arg("sweep") = std::vector<double>{}, py::arg("draws") = 16000,
      py::arg("reps") = 1000, py::arg("seed") = 0,
      "Runs a toy study and returns the nested summary (sweep -> method -> statistics).");
}
