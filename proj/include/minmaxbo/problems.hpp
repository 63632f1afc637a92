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

// The sliced synthetic test problems. Controllable parameter theta is
// continuous; the uncontrollable parameter takes one of a few fixed slices.

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minmaxbo/gp.hpp"
#include "minmaxbo/types.hpp"

namespace minmaxbo {

/// A ground-truth min-max point in raw problem coordinates.
struct RawLocation {
  double theta = 0.0;
  double zeta = 0.0;
};

struct Scaling {
  double shift = 0.0;
  double scale = 1.0;
};

class MinMaxProblem {
 public:
  using RawFunction = std::function<double(double theta, double zeta)>;

  /// Unscaled problem (shift 0, scale 1). Throws if a true location uses a
  /// zeta that is not one of `slices`.
  MinMaxProblem(std::string name, double theta_lo, double theta_hi,
                std::vector<double> slices, RawFunction raw,
                std::vector<RawLocation> true_locations, KernelParams gp_params);

  const std::string& name() const { return name_; }
  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }
  const std::vector<double>& slices() const { return slices_; }
  int slice_count() const { return static_cast<int>(slices_.size()); }
  const std::vector<RawLocation>& true_locations() const { return true_locations_; }
  const KernelParams& gp_params() const { return gp_params_; }
  const Scaling& scaling() const { return scaling_; }

  double raw_eval(double theta, double zeta) const { return raw_(theta, zeta); }

  /// Same problem with frozen normalization constants.
  MinMaxProblem with_scaling(Scaling scaling) const;

  double theta_to_raw(double theta_scaled) const;
  double theta_to_scaled(double theta_raw) const;
  /// Position of slice `index` on the scaled second axis.
  double zeta_scaled(int index) const;
  int slice_index(double zeta) const;

  /// (raw value - shift) / scale at the affinely mapped theta and the given slice.
  double evaluate_scaled(double theta_scaled, int slice_index) const;

  /// Ground-truth min-max points in scaled coordinates.
  std::vector<Location> true_scaled_locations() const;
  /// Raw value f(theta*, zeta*) at the first listed ground-truth point.
  double true_minmax_value() const;
  /// Normalized value at the ground truth.
  double true_scaled_value() const;

  /// |v(estimate) - v(truth)| in normalized units.
  double residual(const Location& estimate) const;

 private:
  std::string name_;
  double theta_lo_;
  double theta_hi_;
  std::vector<double> slices_;
  RawFunction raw_;
  std::vector<RawLocation> true_locations_;
  KernelParams gp_params_;
  Scaling scaling_;
};

/// Mean and population standard deviation of the raw values over
/// `grid_resolution` evenly spaced thetas (endpoints included) times all
/// slices. Throws on zero variance.
Scaling compute_scaling(const MinMaxProblem& problem, int grid_resolution);

inline constexpr int kDefaultScalingResolution = 1001;

/// One of "branin_star", "camel_star", "eggholder_star", already scaled.
MinMaxProblem make_problem(std::string_view name,
                           int scaling_resolution = kDefaultScalingResolution);

std::vector<std::string> problem_names();

double branin(double x1, double x2);
double six_hump_camel(double x1, double x2);
double eggholder(double x1, double x2);

}  // namespace minmaxbo
