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

// Expectation Propagation for the probability that a Gaussian vector
// satisfies a set of pairwise-difference constraints f[plus] - f[minus] >= 0.
//
// The constraints are handled in constraint space: h = A f ~ N(A mu, A S A^T)
// and each coordinate of h carries one Gaussian site matched against the
// one-dimensional truncated marginal.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minmaxbo/gp.hpp"

namespace minmaxbo {

/// f[plus] - f[minus] >= 0.
struct LinearConstraint {
  Eigen::Index plus = 0;
  Eigen::Index minus = 0;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct EpOptions {
  double damping = 0.5;
  /// Convergence when every site parameter moves by less than
  /// tolerance * max(1, |parameter|) during a sweep.
  double tolerance = 1e-6;
  int max_sweeps = 100;
  /// Try full (undamped) steps first and fall back to damped sweeps from
  /// the initial sites when that run does not converge.
  bool undamped_first = true;
};

/// Natural parameters of the Gaussian sites, one per constraint.
struct EpSites {
  Eigen::VectorXd precision;
  Eigen::VectorXd shift;

  static EpSites zeros(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
};

struct EpResult {
  /// exp(log_probability), floored at 1e-300.
  double probability = 1.0;
  /// At most 0. Non-finite estimates are replaced by log(1e-300).
  double log_probability = 0.0;
  bool converged = false;
  int sweeps = 0;
  /// Site updates skipped because of a non-positive cavity or site precision.
  int skipped_updates = 0;
  EpSites sites;
};

/// Constraint-space moments m = A mean, B = A (cov + jitter I) A^T.
void constraint_moments(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        const std::vector<LinearConstraint>& constraints, double jitter,
                        Eigen::VectorXd& m, Eigen::MatrixXd& b);

/// EP estimate of P(h >= 0 elementwise) for h ~ N(m, b).
EpResult ep_orthant(const Eigen::VectorXd& m, const Eigen::MatrixXd& b,
                    const EpOptions& options = {}, const EpSites* warm_start = nullptr);

/// EP estimate of P(all constraints hold) for f ~ N(mean, cov). The
/// covariance receives a relative diagonal jitter of 1e-10 before use.
EpResult ep_probability(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        const std::vector<LinearConstraint>& constraints,
                        const EpOptions& options = {});

/// Gaussian over auxiliary functionals z after multiplying in the sites on h.
/// `z_mean`, `z_cov` are the prior moments of z and `cross` = Cov(z, h).
Prediction condition_on_sites(const Eigen::VectorXd& z_mean, const Eigen::MatrixXd& z_cov,
                              const Eigen::MatrixXd& cross, const Eigen::VectorXd& m,
                              const Eigen::MatrixXd& b, const EpSites& sites);

}  // namespace minmaxbo
