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

#include <gtest/gtest.h>

#include "minmaxbo/types.hpp"

namespace minmaxbo {
namespace {

TEST(Normal, CdfKnownValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0 / std::numbers::sqrt2), 0.76024993890652326, 1e-12);
  EXPECT_NEAR(normal_cdf(-1.959963984540054), 0.025, 1e-12);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(Normal, LogCdfMatchesDirectLogInTheBulk) {
  for (double x = -4.9; x < 4.9; x += 0.37)
    EXPECT_NEAR(log_normal_cdf(x), std::log(normal_cdf(x)), 1e-12) << x;
}

TEST(Normal, LogCdfDeepTail) {
  // log Phi(x) ~ -x^2/2 - log(-x) - log(sqrt(2 pi)) + log(1 - 1/x^2 + 3/x^4)
  for (double x : {-10.0, -20.0, -40.0}) {
    const double series = -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
                          std::log1p(-1.0 / (x * x) + 3.0 / (x * x * x * x));
    EXPECT_NEAR(log_normal_cdf(x), series, 1e-4 * std::abs(series)) << x;
  }
  EXPECT_LT(log_normal_cdf(12.0), 0.0);
  EXPECT_GT(log_normal_cdf(12.0), -1e-30);
  EXPECT_TRUE(std::isfinite(log_normal_cdf(-300.0)));
}

TEST(Normal, ErfcxContinuousAcrossBranches) {
  for (double x : {-3.0, -0.5, 0.0, 0.5, 2.0, 4.9})
    EXPECT_NEAR(erfcx(x), std::exp(x * x) * std::erfc(x), 1e-12 * erfcx(x)) << x;
  EXPECT_NEAR(erfcx(4.999999), erfcx(5.000001), 1e-7);
  // erfcx(x) ~ 1/(x sqrt(pi)) for large x.
  EXPECT_NEAR(erfcx(1e4) * 1e4 * std::sqrt(std::numbers::pi), 1.0, 1e-8);
}

TEST(Normal, InverseMillsRatioIsPdfOverCdf) {
  for (double x = -6.0; x < 6.0; x += 0.5)
    EXPECT_NEAR(inverse_mills_ratio(x), normal_pdf(x) / normal_cdf(x),
                1e-10 * inverse_mills_ratio(x))
        << x;
  // Far left tail approaches -x.
  EXPECT_NEAR(inverse_mills_ratio(-50.0), 50.0, 0.05);
}

TEST(GaussHermite, IntegratesPolynomialsExactly) {
  const QuadratureRule rule = gauss_hermite(9);
  ASSERT_EQ(rule.nodes.size(), 9u);
  double sum = 0.0, m2 = 0.0, m4 = 0.0, m8 = 0.0, m3 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k], w = rule.weights[k];
    sum += w;
    m2 += w * x * x;
    m3 += w * x * x * x;
    m4 += w * std::pow(x, 4);
    m8 += w * std::pow(x, 8);
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_NEAR(m2, 1.0, 1e-12);
  EXPECT_NEAR(m3, 0.0, 1e-12);
  EXPECT_NEAR(m4, 3.0, 1e-11);
  EXPECT_NEAR(m8, 105.0, 1e-8);
  EXPECT_EQ(rule.nodes[4], 0.0);
}

TEST(GaussHermite, SingleNodeIsTheMean) {
  const QuadratureRule rule = gauss_hermite(1);
  EXPECT_EQ(rule.nodes[0], 0.0);
  EXPECT_DOUBLE_EQ(rule.weights[0], 1.0);
  EXPECT_THROW(gauss_hermite(0), InvalidArgument);
}

}  // namespace
}  // namespace minmaxbo
