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

#include "minmaxbo/baselines.hpp"

#include <cmath>

#include "minmaxbo/minmax.hpp"

namespace minmaxbo {

Location thompson_select(const Eigen::MatrixXd& sample_table, const Eigen::VectorXd& grid) {
  if (sample_table.rows() != grid.size())
    throw InvalidArgument("thompson_select: table rows do not match the grid");
  const MinMaxPoint best = grid_minmax(sample_table);
  return {grid(best.theta_index), best.slice};
}

Location thompson_step(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                       Rng& rng) {
  if (grid.size() < 1) throw InvalidArgument("thompson_step: empty grid");
  const Eigen::MatrixXd draw = gp.sample_joint(joint_locations(grid, slice_count), 1, rng);
  return thompson_select(reshape_table(draw.row(0).transpose(), slice_count), grid);
}

double BetaSchedule::operator()(int t) const {
  const double progress = static_cast<double>(t) / static_cast<double>(budget);
  return beta0 * (1.0 - progress) * (1.0 - progress) + beta_min;
}

Eigen::Index wabersich_outer(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                             double beta) {
  if (grid.size() < 1) throw InvalidArgument("wabersich_outer: empty grid");
  const MarginalPrediction pred = gp.predict_marginal(joint_locations(grid, slice_count));
  const Eigen::MatrixXd mean = reshape_table(pred.mean, slice_count);
  const Eigen::MatrixXd sd = reshape_table(pred.variance.cwiseSqrt(), slice_count);
  const double root_beta = std::sqrt(beta);
  Eigen::Index best = 0;
  double best_value = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    int worst = 0;
    for (int s = 1; s < slice_count; ++s)
      if (mean(i, s) > mean(i, worst)) worst = s;
    const double lower = mean(i, worst) - root_beta * sd(i, worst);
    if (i == 0 || lower < best_value) {
      best = i;
      best_value = lower;
    }
  }
  return best;
}

int wabersich_inner(const GpPosterior& gp, double theta, int slice_count, double beta) {
  const MarginalPrediction pred =
      gp.predict_marginal(joint_locations(Eigen::VectorXd::Constant(1, theta), slice_count));
  const double root_beta = std::sqrt(beta);
  int best = 0;
  double best_value = 0.0;
  for (int s = 0; s < slice_count; ++s) {
    const double upper = pred.mean(s) + root_beta * std::sqrt(pred.variance(s));
    if (s == 0 || upper > best_value) {
      best = s;
      best_value = upper;
    }
  }
  return best;
}

Location wabersich_step(const GpPosterior& gp, const Eigen::VectorXd& grid, int slice_count,
                        WabersichState& state, const BetaSchedule& schedule) {
  const double beta = schedule(state.iteration);
  state.theta = grid(wabersich_outer(gp, grid, slice_count, beta));
  const int slice = wabersich_inner(gp, state.theta, slice_count, beta);
  ++state.iteration;
  return {state.theta, slice};
}

}  // namespace minmaxbo
