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

// Knowledge Gradient for min-max: the expected drop of the posterior-mean
// min-max value mu* after one fantasized evaluation, by Monte Carlo over the
// fantasy and grid search over candidates.

#pragma once

#include <Eigen/Dense>

#include "minmaxbo/gp.hpp"
#include "minmaxbo/minmax.hpp"
#include "minmaxbo/types.hpp"

namespace minmaxbo {

struct KgConfig {
  int fantasy_count = 32;
  /// Theta grid on which mu* is evaluated (crossed with every slice).
  Eigen::VectorXd grid;
  int slice_count = 0;

  void validate() const;
};

/// grid_minmax of the posterior mean on grid x slices.
MinMaxPoint posterior_mean_minmax(const GpPosterior& gp, const Eigen::VectorXd& grid,
                                  int slice_count);

/// mu*_n - mean_j mu*_{n+1}(y_j) with y_j = predictive mean + sd * z_j; `normals`
/// holds the z_j. No positive-part clamp.
double kg_acquisition(const GpPosterior& gp, const Location& candidate, const KgConfig& config,
                      const Eigen::VectorXd& normals);

/// Draws config.fantasy_count normals from `rng`.
double kg_acquisition(const GpPosterior& gp, const Location& candidate, const KgConfig& config,
                      Rng& rng);

struct KgSelection {
  Location location;
  double score = 0.0;
  /// Scores in JointLayout order over config.grid x slices.
  Eigen::VectorXd scores;
};

/// Scores every grid x slice location with one shared set of fantasy normals
/// and returns the maximizer (first on ties).
KgSelection select_kg_candidate(const GpPosterior& gp, const KgConfig& config, Rng& rng);
KgSelection select_kg_candidate(const GpPosterior& gp, const KgConfig& config,
                                const Eigen::VectorXd& normals);

}  // namespace minmaxbo
