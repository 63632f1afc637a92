// Copyright 2026 The minmaxbo Authors. All Rights Reserved.
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
// =============================================================================

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minmaxbo/baselines.hpp"
#include "minmaxbo/entropy_search.hpp"
#include "minmaxbo/ep.hpp"
#include "minmaxbo/gp.hpp"
#include "minmaxbo/harness.hpp"
#include "minmaxbo/knowledge_gradient.hpp"
#include "minmaxbo/minmax.hpp"
#include "minmaxbo/problems.hpp"

namespace py = pybind11;
using namespace minmaxbo;

namespace {

std::vector<LinearConstraint> to_constraints(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs) {
  std::vector<LinearConstraint> out;
  out.reserve(pairs.size());
  for (const auto& [plus, minus] : pairs) out.push_back({plus, minus});
  return out;
}

py::dict record_columns(const TrialTrace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.records.size());
  Eigen::VectorXi iteration(n), slice(n), est_slice(n);
  Eigen::VectorXd theta(n), observation(n), est_theta(n), residual(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const TrialRecord& r = trace.records[k];
    iteration(k) = r.iteration;
    theta(k) = r.theta;
    slice(k) = r.slice;
    observation(k) = r.observation;
    est_theta(k) = r.est_theta;
    est_slice(k) = r.est_slice;
    residual(k) = r.residual;
  }
  py::dict d;
  d["iteration"] = iteration;
  d["theta"] = theta;
  d["slice"] = slice;
  d["observation"] = observation;
  d["est_theta"] = est_theta;
  d["est_slice"] = est_slice;
  d["residual"] = residual;
  d["seed"] = trace.seed;
  d["config_hash"] = trace.config_hash;
  d["evaluations"] = trace.evaluations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian optimization for min-max problems";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Location>(m, "Location")
      .def(py::init<double, int>(), py::arg("theta"), py::arg("slice"))
      .def_readwrite("theta", &Location::theta)
      .def_readwrite("slice", &Location::slice)
      .def("__eq__", [](const Location& a, const Location& b) { return a == b; })
      .def("__repr__", [](const Location& l) {
        return "Location(theta=" + std::to_string(l.theta) + ", slice=" + std::to_string(l.slice) + ")";
      });

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](double signal_std, Eigen::VectorXd lengthscales, double noise_std) {
             KernelParams p{signal_std, std::move(lengthscales), noise_std};
             p.validate();
             return p;
           }),
           py::arg("signal_std"), py::arg("lengthscales"), py::arg("noise_std"))
      .def_readonly("signal_std", &KernelParams::signal_std)
      .def_readonly("lengthscales", &KernelParams::lengthscales)
      .def_readonly("noise_std", &KernelParams::noise_std);

  py::class_<GpPosterior>(m, "GpPosterior")
      .def_static("fit", [](Eigen::MatrixXd x, Eigen::VectorXd y, KernelParams p) {
                    return GpPosterior::fit({std::move(x), std::move(y)}, std::move(p));
                  },
                  py::arg("locations"), py::arg("observations"), py::arg("params"))
      .def_static("prior", &GpPosterior::prior, py::arg("params"))
      .def("predict", [](const GpPosterior& gp, const Eigen::MatrixXd& q) {
             const Prediction p = gp.predict(q);
             return py::make_tuple(p.mean, p.covariance);
           }, py::arg("queries"), "Joint mean and covariance.")
      .def("predict_mean", &GpPosterior::predict_mean, py::arg("queries"))
      .def("sample_joint", [](const GpPosterior& gp, const Eigen::MatrixXd& q, int count, std::uint64_t seed) {
             Rng rng(seed);
             return gp.sample_joint(q, count, rng);
           }, py::arg("queries"), py::arg("count"), py::arg("seed"))
      .def("fantasize", &GpPosterior::fantasize, py::arg("location"), py::arg("y"));

  py::class_<MinMaxPoint>(m, "MinMaxPoint")
      .def_readonly("theta_index", &MinMaxPoint::theta_index)
      .def_readonly("slice", &MinMaxPoint::slice)
      .def_readonly("value", &MinMaxPoint::value);

  m.def("grid_minmax", [](const Eigen::MatrixXd& v) { return grid_minmax(v); }, py::arg("values"),
        "Min over rows of the max over columns; first index on ties.");
  m.def("worst_case_profile", [](const Eigen::MatrixXd& v) {
          const WorstCaseProfile p = worst_case_profile(v);
          return py::make_tuple(p.max, p.argmax);
        }, py::arg("values"));

  m.def("ep_probability",
        [](const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
           const std::vector<std::pair<Eigen::Index, Eigen::Index>>& constraints) {
          return ep_probability(mean, cov, to_constraints(constraints)).probability;
        },
        py::arg("mean"), py::arg("cov"), py::arg("constraints"),
        "EP estimate of P(f[a] >= f[b] for every (a, b)).");

  py::class_<MinMaxProblem>(m, "Problem")
      .def_property_readonly("name", &MinMaxProblem::name)
      .def_property_readonly("slice_count", &MinMaxProblem::slice_count)
      .def("evaluate", &MinMaxProblem::evaluate_scaled, py::arg("theta"), py::arg("slice"))
      .def("residual", &MinMaxProblem::residual, py::arg("estimate"))
      .def("true_locations", &MinMaxProblem::true_scaled_locations)
      .def_property_readonly("true_value", &MinMaxProblem::true_scaled_value);
  m.def("make_problem", [](const std::string& name) { return make_problem(name); }, py::arg("name"));
  m.def("problem_names", &problem_names);

  m.def("posterior_mean_minmax", &posterior_mean_minmax, py::arg("gp"), py::arg("grid"),
        py::arg("slice_count"));
  m.def("kg_acquisition",
        [](const GpPosterior& gp, const Location& c, const Eigen::VectorXd& grid, int slices,
           const Eigen::VectorXd& normals) {
          return kg_acquisition(gp, c, KgConfig{static_cast<int>(normals.size()), grid, slices}, normals);
        },
        py::arg("gp"), py::arg("candidate"), py::arg("grid"), py::arg("slice_count"), py::arg("normals"));
  m.def("p_opt",
        [](const GpPosterior& gp, int count, int slices, int samples, std::uint64_t seed) {
          Rng rng(seed);
          const RepresentativeSet repset = select_representative_points(count, slices);
          return p_opt(gp, repset, sample_argmax_functions(gp, repset, samples, rng)).probabilities;
        },
        py::arg("gp"), py::arg("representatives"), py::arg("slice_count"),
        py::arg("argmax_samples") = 10, py::arg("seed") = 0,
        "Optimum distribution over evenly spaced representative thetas.");
  m.def("es_select",
        [](const GpPosterior& gp, const Eigen::VectorXd& thetas, int count, int slices,
           std::uint64_t seed) {
          Rng rng(seed);
          EsOptions options;
          options.representative_count = count;
          EntropySearch es(gp, select_representative_points(count, slices), options, rng);
          return es.select(thetas);
        },
        py::arg("gp"), py::arg("candidate_thetas"), py::arg("representatives"), py::arg("slice_count"),
        py::arg("seed") = 0);

  m.def("run_trial",
        [](const std::string& problem, const std::string& acquisition, int iterations,
           std::uint64_t seed, int trial_index) {
          TrialConfig c;
          c.problem = problem;
          c.acquisition = parse_acquisition(acquisition);
          c.iterations = iterations;
          c.seed = seed;
          TrialTrace trace;
          {
            py::gil_scoped_release release;
            trace = run_trial(c, trial_index);
          }
          return record_columns(trace);
        },
        py::arg("problem"), py::arg("acquisition"), py::arg("iterations") = 40,
        py::arg("seed") = 20260, py::arg("trial_index") = 0,
        "Runs one trial with default settings; returns the trace as columns.");
  m.def("aggregate",
        [](const std::vector<Eigen::VectorXd>& residuals) {
          std::vector<TrialTrace> traces;
          for (const auto& r : residuals) {
            TrialTrace t;
            for (Eigen::Index k = 0; k < r.size(); ++k)
              t.records.push_back({static_cast<int>(k + 1), 0.0, 0, 0.0, 0.0, 0, r(k)});
            traces.push_back(std::move(t));
          }
          const auto rows = aggregate(traces);
          Eigen::VectorXd mean(rows.size()), sd(rows.size());
          for (std::size_t k = 0; k < rows.size(); ++k) {
            mean(k) = rows[k].mean_residual;
            sd(k) = rows[k].std_residual;
          }
          return py::make_tuple(mean, sd);
        },
        py::arg("residuals"), "Per-iteration mean and population std of residual series.");
}
