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

#include "minmaxbo/knowledge_gradient.hpp"

#include <cmath>
#include <limits>

namespace minmaxbo {

namespace {

double mean_minmax_value(const Eigen::VectorXd& flat, int slice_count) {
  return grid_minmax(reshape_table(flat, slice_count)).value;
}

Eigen::Vector2d candidate_point(const Location& candidate, int slice_count) {
  if (candidate.slice < 0 || candidate.slice >= slice_count || candidate.theta < 0.0 ||
      candidate.theta > 1.0)
    throw InvalidArgument("knowledge gradient: candidate outside the search space");
  return {candidate.theta, static_cast<double>(candidate.slice) / (slice_count - 1)};
}

// Average mu* over fantasies that move the flat mean along `direction`.
double expected_fantasy_minmax(const Eigen::VectorXd& mean, const Eigen::VectorXd& direction,
                               const Eigen::VectorXd& normals, int slice_count) {
  double total = 0.0;
  Eigen::VectorXd moved(mean.size());
  for (Eigen::Index j = 0; j < normals.size(); ++j) {
    moved = mean + direction * normals(j);
    total += mean_minmax_value(moved, slice_count);
  }
  return total / static_cast<double>(normals.size());
}

}  // namespace

void KgConfig::validate() const {
  if (fantasy_count < 1) throw InvalidArgument("KgConfig: fantasy_count must be >= 1");
  if (grid.size() < 1) throw InvalidArgument("KgConfig: empty grid");
  if (slice_count < 2) throw InvalidArgument("KgConfig: need at least two slices");
}

MinMaxPoint posterior_mean_minmax(const GpPosterior& gp, const Eigen::VectorXd& grid,
                                  int slice_count) {
  if (grid.size() < 1) throw InvalidArgument("posterior_mean_minmax: empty grid");
  const Eigen::VectorXd mean = gp.predict_mean(joint_locations(grid, slice_count));
  return grid_minmax(reshape_table(mean, slice_count));
}

double kg_acquisition(const GpPosterior& gp, const Location& candidate, const KgConfig& config,
                      const Eigen::VectorXd& normals) {
  config.validate();
  if (normals.size() < 1) throw InvalidArgument("kg_acquisition: no fantasy normals");
  const Eigen::MatrixXd locations = joint_locations(config.grid, config.slice_count);
  const Eigen::VectorXd mean = gp.predict_mean(locations);
  const FantasyEffect effect =
      gp.fantasy_effect(locations, candidate_point(candidate, config.slice_count));
  return mean_minmax_value(mean, config.slice_count) -
         expected_fantasy_minmax(mean, effect.direction, normals, config.slice_count);
}

double kg_acquisition(const GpPosterior& gp, const Location& candidate, const KgConfig& config,
                      Rng& rng) {
  config.validate();
  const Eigen::VectorXd z = standard_normals(config.fantasy_count, 1, rng).col(0);
  return kg_acquisition(gp, candidate, config, z);
}

KgSelection select_kg_candidate(const GpPosterior& gp, const KgConfig& config,
                                const Eigen::VectorXd& normals) {
  config.validate();
  const Eigen::MatrixXd locations = joint_locations(config.grid, config.slice_count);
  const Prediction pred = gp.predict(locations);
  const double noise = gp.params().noise_std * gp.params().noise_std;
  const double current = mean_minmax_value(pred.mean, config.slice_count);

  KgSelection out;
  out.scores.resize(locations.rows());
  out.score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < locations.rows(); ++c) {
    const double sd = std::sqrt(pred.covariance(c, c) + noise);
    const Eigen::VectorXd direction = pred.covariance.col(c) / sd;
    out.scores(c) =
        current - expected_fantasy_minmax(pred.mean, direction, normals, config.slice_count);
    if (out.scores(c) > out.score) {
      out.score = out.scores(c);
      out.location = {config.grid(c / config.slice_count),
                      static_cast<int>(c % config.slice_count)};
    }
  }
  return out;
}

KgSelection select_kg_candidate(const GpPosterior& gp, const KgConfig& config, Rng& rng) {
  config.validate();
  const Eigen::VectorXd z = standard_normals(config.fantasy_count, 1, rng).col(0);
  return select_kg_candidate(gp, config, z);
}

}  // namespace minmaxbo
