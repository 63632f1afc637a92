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

#include <gtest/gtest.h>

#include "minmaxbo/minmax.hpp"
#include "test_util.hpp"

namespace minmaxbo {
namespace {

using testing::params_2d;

GpPosterior some_gp() {
  Dataset d{Eigen::MatrixXd(4, 2), Eigen::Vector4d(0.2, -0.7, 0.5, 0.0)};
  d.locations << 0.2, 0.0, 0.4, 1.0, 0.6, 0.5, 0.9, 0.0;
  return GpPosterior::fit(d, params_2d(1.0, 0.2, 0.4, 1e-3));
}

TEST(Thompson, SelectsTheSampleMinMax) {
  Eigen::MatrixXd table(3, 2);
  table << 0.5, 0.9, 0.2, 0.4, 0.1, 0.8;
  const Location loc = thompson_select(table, Eigen::Vector3d(0.0, 0.5, 1.0));
  EXPECT_EQ(loc.theta, 0.5);
  EXPECT_EQ(loc.slice, 1);
  EXPECT_THROW(thompson_select(table, Eigen::Vector2d(0.0, 1.0)), InvalidArgument);
}

TEST(Thompson, StepUsesOneJointDraw) {
  const GpPosterior gp = some_gp();
  const Eigen::VectorXd grid = uniform_grid(30);
  Rng a(3), b(3);
  const Location loc = thompson_step(gp, grid, 3, a);
  const Eigen::MatrixXd draw = gp.sample_joint(joint_locations(grid, 3), 1, b);
  const MinMaxPoint best = grid_minmax(reshape_table(draw.row(0).transpose(), 3));
  EXPECT_EQ(loc.theta, grid(best.theta_index));
  EXPECT_EQ(loc.slice, best.slice);
}

TEST(BetaSchedule, DecaysToTheFloor) {
  const BetaSchedule s{4.0, 0.04, 40};
  EXPECT_DOUBLE_EQ(s(0), 4.04);
  EXPECT_DOUBLE_EQ(s(20), 1.04);
  EXPECT_DOUBLE_EQ(s(40), 0.04);
  for (int t = 1; t <= 40; ++t) EXPECT_LT(s(t), s(t - 1));
}

TEST(Wabersich, OuterMinimizesLowerBoundOfWorstCase) {
  const GpPosterior gp = some_gp();
  const Eigen::VectorXd grid = uniform_grid(41);
  for (const double beta : {0.0, 0.5, 4.0}) {
    double best = 1e300;
    Eigen::Index arg = -1;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const MarginalPrediction m = gp.predict_marginal(joint_locations(grid.segment(i, 1), 3));
      Eigen::Index worst;
      m.mean.maxCoeff(&worst);
      const double lower = m.mean(worst) - std::sqrt(beta) * std::sqrt(m.variance(worst));
      if (lower < best) {
        best = lower;
        arg = i;
      }
    }
    EXPECT_EQ(wabersich_outer(gp, grid, 3, beta), arg) << beta;
  }
}

TEST(Wabersich, InnerMaximizesUpperBound) {
  const GpPosterior gp = some_gp();
  const MarginalPrediction m = gp.predict_marginal(joint_locations(Eigen::VectorXd::Constant(1, 0.4), 3));
  Eigen::Index arg;
  (m.mean + std::sqrt(2.0) * m.variance.cwiseSqrt()).maxCoeff(&arg);
  EXPECT_EQ(wabersich_inner(gp, 0.4, 3, 2.0), arg);
}

TEST(Wabersich, LargeBetaExploresTheMostUncertainSlice) {
  const GpPosterior gp = some_gp();
  const MarginalPrediction m = gp.predict_marginal(joint_locations(Eigen::VectorXd::Constant(1, 0.4), 3));
  Eigen::Index arg;
  m.variance.maxCoeff(&arg);
  EXPECT_EQ(wabersich_inner(gp, 0.4, 3, 1e12), arg);
}

TEST(Wabersich, ZeroBetaIsMeanOnly) {
  const GpPosterior gp = some_gp();
  const Eigen::VectorXd grid = uniform_grid(50);
  const MinMaxPoint mean_minmax = grid_minmax(reshape_table(gp.predict_mean(joint_locations(grid, 3)), 3));
  EXPECT_EQ(wabersich_outer(gp, grid, 3, 0.0), mean_minmax.theta_index);
  const BetaSchedule zero{0.0, 0.0, 10};
  WabersichState a, b;
  EXPECT_EQ(wabersich_step(gp, grid, 3, a, zero), wabersich_step(gp, grid, 3, b, zero));
}

TEST(Wabersich, StepAdvancesState) {
  const GpPosterior gp = some_gp();
  const Eigen::VectorXd grid = uniform_grid(20);
  WabersichState state;
  const BetaSchedule s;
  const Location loc = wabersich_step(gp, grid, 3, state, s);
  EXPECT_EQ(state.iteration, 1);
  EXPECT_EQ(state.theta, loc.theta);
  EXPECT_EQ(loc.theta, grid(wabersich_outer(gp, grid, 3, s(0))));
  EXPECT_EQ(loc.slice, wabersich_inner(gp, loc.theta, 3, s(0)));
}

}  // namespace
}  // namespace minmaxbo
