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

// Gaussian Process regression with a zero mean and an ARD squared-exponential
// kernel whose hyperparameters stay fixed for the lifetime of a run.

#pragma once

#include <Eigen/Dense>

#include "minmaxbo/types.hpp"

namespace minmaxbo {

struct KernelParams {
  double signal_std = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_std = 1e-3;

  Eigen::Index dimension() const { return lengthscales.size(); }
  void validate() const;
};

/// Observations with one location per row.
struct Dataset {
  Eigen::MatrixXd locations;
  Eigen::VectorXd observations;

  Eigen::Index size() const { return observations.size(); }
  void validate() const;
  Dataset extended(const Eigen::VectorXd& location, double observation) const;
};

/// sigma_v^2 exp(-0.5 sum_d (a_d - b_d)^2 / l_d^2). Throws on dimension mismatch.
double kernel_eval(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b,
                   const KernelParams& params);

/// Cross-covariance between the rows of `a` and the rows of `b`.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const KernelParams& params);

/// Lower Cholesky factor of `m + jitter I`. The jitter starts at 1e-10 * scale
/// and grows by x100 up to 1e-6 * scale; past that a NumericalError naming
/// `what` is thrown. The jitter actually used is written to `used_jitter`.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& m, double scale,
                                     const char* what,
                                     double* used_jitter = nullptr);

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct MarginalPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// How one noisy observation at a fixed location moves the joint predictive
/// over a query set. Observing y shifts the mean by
/// direction * (y - mean) / sd and removes direction * direction^T from the
/// covariance; `mean` and `sd` describe the noisy observation itself.
struct FantasyEffect {
  Eigen::VectorXd direction;
  double mean = 0.0;
  double sd = 0.0;
};

/// Immutable posterior. Safe to share between threads.
class GpPosterior {
 public:
  /// Posterior with no data: the zero-mean prior.
  static GpPosterior prior(KernelParams params);
  /// Throws InvalidArgument on an empty or malformed dataset and
  /// NumericalError if the Gram matrix cannot be factorized.
  static GpPosterior fit(Dataset data, KernelParams params);

  const Dataset& dataset() const { return data_; }
  const KernelParams& params() const { return params_; }
  /// Lower factor of K + (sigma_n^2 + jitter) I.
  const Eigen::MatrixXd& gram_factor() const { return factor_; }
  const Eigen::VectorXd& dual_weights() const { return alpha_; }
  double jitter() const { return jitter_; }

  Prediction predict(const Eigen::MatrixXd& queries) const;
  MarginalPrediction predict_marginal(const Eigen::MatrixXd& queries) const;
  Eigen::VectorXd predict_mean(const Eigen::MatrixXd& queries) const;

  /// count x |queries| matrix; each row is one joint draw of the latent function.
  Eigen::MatrixXd sample_joint(const Eigen::MatrixXd& queries, int count,
                               Rng& rng) const;

  /// Posterior on the dataset extended by (location, y), same hyperparameters.
  GpPosterior fantasize(const Eigen::VectorXd& location, double y) const;

  FantasyEffect fantasy_effect(const Eigen::MatrixXd& queries,
                               const Eigen::VectorXd& location) const;

 private:
  GpPosterior(Dataset data, KernelParams params);
  void check_queries(const Eigen::MatrixXd& queries) const;

  Dataset data_;
  KernelParams params_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

/// Draws `normals.rows()` joint samples from N(mean, covariance) as
/// mean + L z, where L is the jittered Cholesky factor. Sharing `normals`
/// between calls gives common random numbers.
Eigen::MatrixXd sample_gaussian(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& covariance,
                                const Eigen::MatrixXd& normals,
                                double jitter_scale);

}  // namespace minmaxbo
