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

// Benchmarks: Thompson Sampling on the discretization and the nested GP-UCB
// scheme (outer minimization of a lower bound on the worst case, inner
// maximization of an upper bound over slices).

#pragma once

#include <Eigen/Dense>

#include "minmaxbo/gp.hpp"
#include "minmaxbo/types.hpp"

namespace minmaxbo {

/// Min-max location of an already drawn grid x slices sample table.
Location thompson_select(const Eigen::MatrixXd& sample_table, const Eigen::VectorXd& grid);

/// Draws one joint sample on grid x slices and returns its min-max location.
Location thompson_step(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                       Rng& rng);

/// beta_t = beta0 (1 - t/T)^2 + beta_min for t in [0, T).
struct BetaSchedule {
  double beta0 = 4.0;
  double beta_min = 0.04;
  int budget = 40;

  double operator()(int t) const;
};

struct WabersichState {
  /// Zero-based iteration counter, advanced by wabersich_step.
  int iteration = 0;
  /// Outer candidate chosen at the latest step, -1 before the first.
  double theta = -1.0;
};

/// Outer step: grid theta minimizing max_z mu(theta, z) - sqrt(beta) sigma(theta, zhat(theta)),
/// zhat(theta) = argmax_z mu(theta, z). Returns the grid index.
Eigen::Index wabersich_outer(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                             double beta);

/// Inner step: slice maximizing mu(theta, z) + sqrt(beta) sigma(theta, z).
int wabersich_inner(const GpPosterior& gp, double theta, int slice_count, double beta);

/// Refreshes the outer candidate from `gp`, then picks the inner slice there.
/// One evaluation per call.
Location wabersich_step(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                        WabersichState& state, const BetaSchedule& schedule);

}  // namespace minmaxbo
