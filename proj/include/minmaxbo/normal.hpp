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

#pragma once

#include <vector>

namespace minmaxbo {

double normal_pdf(double x);
double normal_cdf(double x);

/// log Phi(x), accurate in the far lower tail.
double log_normal_cdf(double x);

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// phi(x) / Phi(x), accurate for large negative x.
double inverse_mills_ratio(double x);

/// Nodes and weights for E[f(Z)], Z ~ N(0,1). Weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Probabilists' Gauss-Hermite rule with `count` nodes (Golub-Welsch).
QuadratureRule gauss_hermite(int count);

}  // namespace minmaxbo
