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

#include "minmaxbo/problems.hpp"

#include <cmath>
#include <numbers>

namespace minmaxbo {

double branin(double x1, double x2) {
  constexpr double pi = std::numbers::pi;
  constexpr double a = 1.0;
  constexpr double b = 5.1 / (4.0 * pi * pi);
  constexpr double c = 5.0 / pi;
  constexpr double r = 6.0;
  constexpr double s = 10.0;
  constexpr double t = 1.0 / (8.0 * pi);
  const double inner = x2 - b * x1 * x1 + c * x1 - r;
  return a * inner * inner + s * (1.0 - t) * std::cos(x1) + s;
}

double six_hump_camel(double x1, double x2) {
  const double x1sq = x1 * x1;
  const double x2sq = x2 * x2;
  return (4.0 - 2.1 * x1sq + x1sq * x1sq / 3.0) * x1sq + x1 * x2 + (-4.0 + 4.0 * x2sq) * x2sq;
}

double eggholder(double x1, double x2) {
  return -(x2 + 47.0) * std::sin(std::sqrt(std::abs(x2 + 0.5 * x1 + 47.0))) -
         x1 * std::sin(std::sqrt(std::abs(x1 - (x2 + 47.0))));
}

MinMaxProblem::MinMaxProblem(std::string name, double theta_lo, double theta_hi,
                             std::vector<double> slices, RawFunction raw,
                             std::vector<RawLocation> true_locations,
                             KernelParams gp_params)
    : name_(std::move(name)),
      theta_lo_(theta_lo),
      theta_hi_(theta_hi),
      slices_(std::move(slices)),
      raw_(std::move(raw)),
      true_locations_(std::move(true_locations)),
      gp_params_(std::move(gp_params)) {
  if (!(theta_hi_ > theta_lo_)) throw InvalidArgument(name_ + ": empty theta interval");
  if (slices_.size() < 2) throw InvalidArgument(name_ + ": need at least two slices");
  if (true_locations_.empty()) throw InvalidArgument(name_ + ": no ground-truth location");
  gp_params_.validate();
  if (gp_params_.dimension() != 2) throw InvalidArgument(name_ + ": GP must be two-dimensional");
  for (const RawLocation& loc : true_locations_) {
    slice_index(loc.zeta);
    if (loc.theta < theta_lo_ || loc.theta > theta_hi_)
      throw InvalidArgument(name_ + ": ground-truth theta outside the bounds");
  }
}

MinMaxProblem MinMaxProblem::with_scaling(Scaling scaling) const {
  if (!(scaling.scale > 0.0)) throw InvalidArgument(name_ + ": output scale must be > 0");
  MinMaxProblem out = *this;
  out.scaling_ = scaling;
  return out;
}

double MinMaxProblem::theta_to_raw(double theta_scaled) const {
  return theta_lo_ + theta_scaled * (theta_hi_ - theta_lo_);
}

double MinMaxProblem::theta_to_scaled(double theta_raw) const {
  return (theta_raw - theta_lo_) / (theta_hi_ - theta_lo_);
}

double MinMaxProblem::zeta_scaled(int index) const {
  return static_cast<double>(index) / static_cast<double>(slice_count() - 1);
}

int MinMaxProblem::slice_index(double zeta) const {
  for (std::size_t i = 0; i < slices_.size(); ++i)
    if (slices_[i] == zeta) return static_cast<int>(i);
  throw InvalidArgument(name_ + ": zeta " + std::to_string(zeta) + " is not a slice");
}

double MinMaxProblem::evaluate_scaled(double theta_scaled, int slice_index) const {
  if (!(theta_scaled >= 0.0 && theta_scaled <= 1.0))
    throw InvalidArgument(name_ + ": scaled theta outside [0,1]");
  if (slice_index < 0 || slice_index >= slice_count())
    throw InvalidArgument(name_ + ": slice index out of range");
  const double raw = raw_(theta_to_raw(theta_scaled), slices_[slice_index]);
  return (raw - scaling_.shift) / scaling_.scale;
}

std::vector<Location> MinMaxProblem::true_scaled_locations() const {
  std::vector<Location> out;
  for (const RawLocation& loc : true_locations_)
    out.push_back({theta_to_scaled(loc.theta), slice_index(loc.zeta)});
  return out;
}

double MinMaxProblem::true_minmax_value() const {
  return raw_(true_locations_.front().theta, true_locations_.front().zeta);
}

double MinMaxProblem::true_scaled_value() const {
  return (true_minmax_value() - scaling_.shift) / scaling_.scale;
}

double MinMaxProblem::residual(const Location& estimate) const {
  return std::abs(evaluate_scaled(estimate.theta, estimate.slice) - true_scaled_value());
}

Scaling compute_scaling(const MinMaxProblem& problem, int grid_resolution) {
  if (grid_resolution < 2) throw InvalidArgument("compute_scaling: resolution must be >= 2");
  const Eigen::VectorXd grid = uniform_grid(grid_resolution);
  std::vector<double> values;
  values.reserve(grid.size() * problem.slices().size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    for (double zeta : problem.slices())
      values.push_back(problem.raw_eval(problem.theta_to_raw(grid(i)), zeta));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (!(var > 1e-300))
    throw InvalidArgument("compute_scaling: " + problem.name() +
                          " has zero variance over the scaling grid");
  return {mean, std::sqrt(var)};
}

namespace {

KernelParams table_params(double noise, double signal, double l_theta, double l_zeta) {
  KernelParams p;
  p.noise_std = noise;
  p.signal_std = signal;
  p.lengthscales = Eigen::Vector2d(l_theta, l_zeta);
  return p;
}

MinMaxProblem unscaled_problem(std::string_view name) {
  if (name == "branin_star") {
    return MinMaxProblem("branin_star", -5.0, 10.0, {0.0, 4.0, 8.0, 12.0},
                         [](double t, double z) { return -branin(t, z); },
                         {{-5.0, 12.0}}, table_params(0.001, 1.0, 0.2, 0.4));
  }
  if (name == "camel_star") {
    return MinMaxProblem("camel_star", -3.0, 3.0, {-0.9, 0.0, 1.0},
                         [](double t, double z) { return std::log(six_hump_camel(t, z) + 2.0); },
                         {{0.0, 0.0}, {0.0, 1.0}}, table_params(0.001, 0.5, 0.2, 0.2));
  }
  if (name == "eggholder_star") {
    return MinMaxProblem("eggholder_star", -512.0, 512.0, {-512.0, 0.0, 185.0},
                         [](double t, double z) { return eggholder(t, z); },
                         {{234.647671, 185.0}}, table_params(0.001, 1.0, 0.09, 0.09));
  }
  throw InvalidArgument("unknown problem '" + std::string(name) +
                        "' (expected branin_star, camel_star or eggholder_star)");
}

}  // namespace

MinMaxProblem make_problem(std::string_view name, int scaling_resolution) {
  MinMaxProblem problem = unscaled_problem(name);
  return problem.with_scaling(compute_scaling(problem, scaling_resolution));
}

std::vector<std::string> problem_names() {
  return {"branin_star", "camel_star", "eggholder_star"};
}

}  // namespace minmaxbo
