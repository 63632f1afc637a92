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

// Entropy Search for min-max problems.
//
// The optimum distribution p_opt lives on N representative thetas. It is
// estimated by sampling argmax functions g from the GP at the joint
// locations (theta_i, zeta) and averaging, over the samples, the probability
// that theta_i* minimizes the worst-case function given that g is the argmax
// function. That conditional probability is a Gaussian orthant probability
// with constraints on at most two locations each and is computed with EP.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minmaxbo/ep.hpp"
#include "minmaxbo/gp.hpp"
#include "minmaxbo/minmax.hpp"
#include "minmaxbo/normal.hpp"
#include "minmaxbo/types.hpp"

namespace minmaxbo {

inline constexpr Eigen::Index kDefaultEpDimensionCap = 256;

struct RepresentativeSet {
  Eigen::VectorXd thetas;
  /// N * |Z| GP inputs in JointLayout order.
  Eigen::MatrixXd joint_locations;
  JointLayout layout;
};

/// `count` thetas evenly spaced on [0,1] (endpoints included) crossed with
/// all slices. Throws if count < 2 or count * slice_count exceeds `dimension_cap`.
RepresentativeSet select_representative_points(int count, int slice_count,
                                               Eigen::Index dimension_cap = kDefaultEpDimensionCap);

/// Representative set on explicit thetas (distinct, inside [0,1]).
RepresentativeSet make_representative_set(const Eigen::VectorXd& thetas, int slice_count,
                                          Eigen::Index dimension_cap = kDefaultEpDimensionCap);

struct OptimumDistribution {
  Eigen::VectorXd probabilities;
};

struct EsOptions {
  int representative_count = 20;
  int argmax_samples = 10;
  int quadrature_nodes = 9;
  EpOptions ep;
  /// When false the argmax-consistency sites are fitted once per argmax
  /// sample and held fixed while the minimizer constraints are processed on
  /// the N worst-case values. When true, every i* that keeps mass is then
  /// rerun with EP over all of its constraints, warm-started from those sites.
  bool refine_consistency = true;
  Eigen::Index dimension_cap = kDefaultEpDimensionCap;
  /// When positive, select() scores only this many candidates by entropy
  /// reduction: those with the largest screening_score. Zero scores all.
  int screen_count = 8;
};

/// Counters and validity bounds accumulated over ES computations.
struct EsDiagnostics {
  long ep_runs = 0;
  long ep_divergences = 0;
  long skipped_site_updates = 0;
  long uniform_fallbacks = 0;
  long distributions = 0;
  double max_sum_error = 0.0;
  double min_entry = 1.0;
  double max_entry = 0.0;
  /// max(entropy - ln N) over recorded distributions.
  double max_entropy_excess = -1.0;

  void record(const OptimumDistribution& p);
  void merge(const EsDiagnostics& other);
};

/// Argmax-consistency constraints f(theta_i, g_i) >= f(theta_i, zeta) for every
/// i and zeta != g_i, followed by minimizer constraints
/// f(theta_i, g_i) >= f(theta_i*, g_i*) for every i != i*.
std::vector<LinearConstraint> build_constraints(const RepresentativeSet& repset,
                                                const ArgmaxSample& g, Eigen::Index i_star);

/// Argmax functions of the joint draws mean + L z_m for each row z_m of
/// `normals`; L is the Cholesky factor of the covariance with jitter relative
/// to `jitter_scale`.
std::vector<ArgmaxSample> argmax_functions(const Prediction& joint, const RepresentativeSet& repset,
                                           const Eigen::MatrixXd& normals, double jitter_scale);

std::vector<ArgmaxSample> sample_argmax_functions(const GpPosterior& gp,
                                                  const RepresentativeSet& repset, int count,
                                                  Rng& rng);

/// P(theta_i* is the worst-case minimizer | g), normalized over i*. `joint`
/// is the GP predictive at repset.joint_locations.
OptimumDistribution conditional_popt(const Prediction& joint, const RepresentativeSet& repset,
                                     const ArgmaxSample& g, const EsOptions& options = {},
                                     EsDiagnostics* diagnostics = nullptr);

OptimumDistribution conditional_popt(const GpPosterior& gp, const RepresentativeSet& repset,
                                     const ArgmaxSample& g, const EsOptions& options = {},
                                     EsDiagnostics* diagnostics = nullptr);

/// Mean of conditional_popt over the samples; identical samples are solved once.
OptimumDistribution p_opt(const Prediction& joint, const RepresentativeSet& repset,
                          const std::vector<ArgmaxSample>& samples, const EsOptions& options = {},
                          EsDiagnostics* diagnostics = nullptr);

OptimumDistribution p_opt(const GpPosterior& gp, const RepresentativeSet& repset,
                          const std::vector<ArgmaxSample>& samples, const EsOptions& options = {},
                          EsDiagnostics* diagnostics = nullptr);

/// Shannon entropy in nats, 0 log 0 = 0.
double entropy(const OptimumDistribution& p);

/// Acquisition state for one posterior: the joint predictive, the common
/// standard normals that generate argmax samples (before and after every
/// fantasy) and the current entropy.
class EntropySearch {
 public:
  EntropySearch(const GpPosterior& gp, RepresentativeSet repset, EsOptions options,
                Eigen::MatrixXd argmax_normals);
  /// Draws argmax_samples x |joint| normals from `rng`.
  EntropySearch(const GpPosterior& gp, RepresentativeSet repset, EsOptions options, Rng& rng);

  double current_entropy() const { return entropy_; }
  const OptimumDistribution& current_distribution() const { return current_; }
  const RepresentativeSet& representatives() const { return repset_; }
  const EsDiagnostics& diagnostics() const { return diagnostics_; }

  /// Expected entropy reduction from one noisy observation at `candidate`,
  /// integrated by Gauss-Hermite quadrature over the predictive.
  double score(const Location& candidate);

  /// Variance explained at the joint locations by one observation at
  /// `candidate`, weighted by the current mass on each (theta_i, zeta) being
  /// the min-max pair: p_opt(i) times the share of argmax samples with g_i = zeta.
  double screening_score(const Location& candidate) const;

  /// Best candidate over thetas x all slices; ties go to the first.
  Location select(const Eigen::VectorXd& candidate_thetas);

 private:
  Eigen::Vector2d candidate_point(const Location& candidate) const;

  GpPosterior gp_;
  RepresentativeSet repset_;
  EsOptions options_;
  Eigen::MatrixXd normals_;
  QuadratureRule rule_;
  Prediction joint_;
  OptimumDistribution current_;
  Eigen::VectorXd pair_mass_;
  double entropy_ = 0.0;
  EsDiagnostics diagnostics_;
};

/// One-shot score; see EntropySearch::score.
double es_acquisition(const GpPosterior& gp, const Location& candidate,
                      const RepresentativeSet& repset, const Eigen::MatrixXd& argmax_normals,
                      const EsOptions& options = {}, EsDiagnostics* diagnostics = nullptr);

}  // namespace minmaxbo
