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

#include "minmaxbo/normal.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "minmaxbo/types.hpp"

namespace minmaxbo {

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double erfcx(double x) {
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction erfc(x) = exp(-x^2)/sqrt(pi) / (x + 1/2/(x + 1/(x + 3/2/(x + ...))))
  double t = x;
  for (int k = 60; k >= 1; --k) t = x + 0.5 * k / t;
  return 1.0 / (std::sqrt(std::numbers::pi) * t);
}

double log_normal_cdf(double x) {
  if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  if (x > -5.0) return std::log(normal_cdf(x));
  return std::log(0.5) - 0.5 * x * x + std::log(erfcx(-x / std::numbers::sqrt2));
}

double inverse_mills_ratio(double x) {
  return std::sqrt(2.0 / std::numbers::pi) / erfcx(-x / std::numbers::sqrt2);
}

QuadratureRule gauss_hermite(int count) {
  if (count < 1) throw InvalidArgument("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    rule.nodes[k] = eig.eigenvalues()(k);
    rule.weights[k] = eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
    total += rule.weights[k];
  }
  for (double& w : rule.weights) w /= total;
  // Symmetrize: the rule is exact-symmetric about zero.
  for (int k = 0; k < count / 2; ++k) {
    const double node = 0.5 * (rule.nodes[count - 1 - k] - rule.nodes[k]);
    const double weight = 0.5 * (rule.weights[k] + rule.weights[count - 1 - k]);
    rule.nodes[k] = -node;
    rule.nodes[count - 1 - k] = node;
    rule.weights[k] = rule.weights[count - 1 - k] = weight;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

}  // namespace minmaxbo
