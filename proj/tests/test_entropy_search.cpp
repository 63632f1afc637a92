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

#include "minmaxbo/entropy_search.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace minmaxbo {
namespace {

using testing::params_2d;

// A two-slice toy posterior over three representative points.
struct Toy {
  KernelParams params = params_2d(1.0, 0.4, 0.6, 1e-3);
  RepresentativeSet repset = select_representative_points(3, 2);
  GpPosterior gp = make_gp();

  GpPosterior make_gp() const {
    Dataset d{Eigen::MatrixXd(4, 2), Eigen::Vector4d(0.3, -0.4, 0.1, 0.5)};
    d.locations << 0.1, 0.0, 0.45, 1.0, 0.9, 0.0, 0.7, 1.0;
    return GpPosterior::fit(d, params);
  }
};

// P(i* minimizes the worst case | the draw's argmax function equals g), by rejection.
Eigen::VectorXd rejection_conditional(const Prediction& joint, const JointLayout& layout,
                                      const ArgmaxSample& g, long draws, Rng& rng) {
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(joint.covariance).matrixL();
  std::normal_distribution<double> z;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(layout.theta_count);
  Eigen::VectorXd e(joint.mean.size());
  for (long k = 0; k < draws; ++k) {
    for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = z(rng);
    const Eigen::VectorXd f = joint.mean + l * e;
    if (argmax_from_sample(f, layout) != g) continue;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < layout.theta_count; ++i)
      if (f(layout.flat(i, g.assignment[i])) < f(layout.flat(best, g.assignment[best]))) best = i;
    counts(best) += 1.0;
  }
  return counts / counts.sum();
}

// Frequency of each representative point being the worst-case minimizer of a joint draw.
Eigen::VectorXd minimizer_frequency(const Prediction& joint, const JointLayout& layout,
                                    const Eigen::MatrixXd& normals) {
  Eigen::LLT<Eigen::MatrixXd> llt(joint.covariance +
                                  1e-10 * Eigen::MatrixXd::Identity(joint.mean.size(),
                                                                    joint.mean.size()));
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(layout.theta_count);
  for (Eigen::Index r = 0; r < normals.rows(); ++r) {
    const Eigen::VectorXd f = joint.mean + l * normals.row(r).transpose();
    Eigen::Index best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < layout.theta_count; ++i) {
      double worst = -std::numeric_limits<double>::infinity();
      for (int s = 0; s < layout.slice_count; ++s) worst = std::max(worst, f(layout.flat(i, s)));
      if (worst < best_value) {
        best_value = worst;
        best = i;
      }
    }
    counts(best) += 1.0;
  }
  return counts / static_cast<double>(normals.rows());
}

void expect_valid(const OptimumDistribution& p) {
  EXPECT_NEAR(p.probabilities.sum(), 1.0, 1e-9);
  EXPECT_GE(p.probabilities.minCoeff(), 0.0);
  EXPECT_LE(p.probabilities.maxCoeff(), 1.0);
  EXPECT_LE(entropy(p), std::log(static_cast<double>(p.probabilities.size())) + 1e-12);
}

TEST(RepresentativeSet, Counting) {
  const RepresentativeSet a = select_representative_points(2, 3);
  EXPECT_EQ(a.joint_locations.rows(), 6);
  EXPECT_EQ(a.layout.size(), 6);
  const RepresentativeSet b = select_representative_points(3, 2);
  EXPECT_EQ(b.thetas, Eigen::Vector3d(0.0, 0.5, 1.0));
  EXPECT_EQ(select_representative_points(20, 4).joint_locations.rows(), 80);
}

TEST(RepresentativeSet, LayoutIsABijection) {
  const RepresentativeSet r = select_representative_points(5, 3);
  std::vector<int> seen(r.layout.size(), 0);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (int s = 0; s < 3; ++s) {
      const Eigen::Index k = r.layout.flat(i, s);
      ++seen[k];
      EXPECT_EQ(r.joint_locations(k, 0), r.thetas(i));
      EXPECT_EQ(r.joint_locations(k, 1), s / 2.0);
    }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(RepresentativeSet, Errors) {
  EXPECT_THROW(select_representative_points(1, 3), InvalidArgument);
  EXPECT_THROW(select_representative_points(100, 4), InvalidArgument);
  EXPECT_NO_THROW(select_representative_points(100, 4, 400));
  EXPECT_THROW(make_representative_set(Eigen::Vector2d(0.3, 0.3), 2), InvalidArgument);
  EXPECT_THROW(make_representative_set(Eigen::Vector2d(0.3, 1.3), 2), InvalidArgument);
}

TEST(ArgmaxSamples, DegenerateWithDenseData) {
  const RepresentativeSet r = select_representative_points(4, 3);
  const KernelParams p = params_2d(1.0, 0.2, 0.4, 1e-4);
  Dataset d{r.joint_locations, Eigen::VectorXd(12)};
  for (Eigen::Index k = 0; k < 12; ++k) d.observations(k) = std::sin(3.0 * k);
  const GpPosterior gp = GpPosterior::fit(d, p);
  const ArgmaxSample expected = argmax_from_sample(gp.predict_mean(r.joint_locations), r.layout);
  Rng rng(1);
  for (const ArgmaxSample& g : sample_argmax_functions(gp, r, 20, rng)) EXPECT_EQ(g, expected);
}

TEST(ArgmaxSamples, DeterministicAndSized) {
  Toy toy;
  Rng a(5), b(5);
  const auto ga = sample_argmax_functions(toy.gp, toy.repset, 10, a);
  EXPECT_EQ(ga.size(), 10u);
  EXPECT_EQ(ga, sample_argmax_functions(toy.gp, toy.repset, 10, b));
  EXPECT_THROW(sample_argmax_functions(toy.gp, toy.repset, 0, a), InvalidArgument);
  EXPECT_EQ(EsOptions{}.argmax_samples, 10);
}

TEST(BuildConstraints, Counting) {
  const RepresentativeSet r = select_representative_points(2, 2);
  EXPECT_EQ(build_constraints(r, {{0, 1}}, 0).size(), 3u);
  const RepresentativeSet single = make_representative_set(Eigen::VectorXd::Constant(1, 0.5), 3);
  EXPECT_EQ(build_constraints(single, {{2}}, 0).size(), 2u);
  const RepresentativeSet big = select_representative_points(5, 4);
  const auto c = build_constraints(big, {{0, 1, 2, 3, 0}}, 2);
  EXPECT_EQ(c.size(), 5u * 3u + 4u);
  for (const LinearConstraint& x : c) {
    EXPECT_GE(x.plus, 0);
    EXPECT_LT(x.plus, big.layout.size());
    EXPECT_GE(x.minus, 0);
    EXPECT_LT(x.minus, big.layout.size());
    EXPECT_NE(x.plus, x.minus);
  }
  EXPECT_THROW(build_constraints(big, {{0, 1, 2, 3, 0}}, 5), InvalidArgument);
  EXPECT_THROW(build_constraints(big, {{0, 1, 2, 3}}, 0), InvalidArgument);
  EXPECT_THROW(build_constraints(big, {{0, 1, 2, 3, 4}}, 0), InvalidArgument);
}

TEST(ConditionalPopt, SinglePointIsCertain) {
  const RepresentativeSet single = make_representative_set(Eigen::VectorXd::Constant(1, 0.5), 3);
  const GpPosterior gp = GpPosterior::prior(params_2d(1.0, 0.2, 0.4, 1e-3));
  EXPECT_EQ(conditional_popt(gp, single, {{1}}).probabilities, Eigen::VectorXd::Ones(1));
}

TEST(ConditionalPopt, ExchangeablePriorIsUniform) {
  const GpPosterior gp = GpPosterior::prior(params_2d(1.0, 0.05, 0.4, 1e-3));
  const RepresentativeSet r = select_representative_points(3, 3);
  const OptimumDistribution p = conditional_popt(gp, r, {{0, 0, 0}});
  expect_valid(p);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p.probabilities(i), 1.0 / 3.0, 0.05);
}

TEST(ConditionalPopt, MatchesRejectionOracle) {
  Toy toy;
  const Prediction joint = toy.gp.predict(toy.repset.joint_locations);
  const ArgmaxSample g = argmax_from_sample(joint.mean, toy.repset.layout);
  Rng rng(6);
  const Eigen::VectorXd truth = rejection_conditional(joint, toy.repset.layout, g, 1000000, rng);
  const OptimumDistribution p = conditional_popt(joint, toy.repset, g);
  expect_valid(p);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p.probabilities(i), truth(i), 0.05) << i;
}

TEST(ConditionalPopt, TwoStageApproximationStaysClose) {
  Toy toy;
  const Prediction joint = toy.gp.predict(toy.repset.joint_locations);
  Rng rng(7);
  EsOptions two_stage;
  two_stage.refine_consistency = false;
  for (const ArgmaxSample& g : sample_argmax_functions(toy.gp, toy.repset, 5, rng)) {
    const OptimumDistribution a = conditional_popt(joint, toy.repset, g);
    const OptimumDistribution b = conditional_popt(joint, toy.repset, g, two_stage);
    expect_valid(b);
    EXPECT_LT((a.probabilities - b.probabilities).cwiseAbs().maxCoeff(), 0.1);
  }
}

TEST(ConditionalPopt, EveryArgmaxPatternMatchesRejectionOracle) {
  Toy toy;
  const Prediction joint = toy.gp.predict(toy.repset.joint_locations);
  Rng rng(12);
  // Patterns whose probability is large enough for a stable rejection estimate.
  for (const ArgmaxSample& g : {ArgmaxSample{{0, 0, 0}}, ArgmaxSample{{0, 0, 1}},
                                ArgmaxSample{{1, 0, 1}}, ArgmaxSample{{0, 1, 1}}}) {
    const Eigen::VectorXd truth = rejection_conditional(joint, toy.repset.layout, g, 1000000, rng);
    const OptimumDistribution p = conditional_popt(joint, toy.repset, g);
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(p.probabilities(i), truth(i), 0.05) << i;
  }
}

TEST(ConditionalPopt, InvariantToConstantMeanShift) {
  Toy toy;
  Prediction joint = toy.gp.predict(toy.repset.joint_locations);
  const ArgmaxSample g{{1, 0, 1}};
  const OptimumDistribution a = conditional_popt(joint, toy.repset, g);
  joint.mean.array() += 7.5;
  const OptimumDistribution b = conditional_popt(joint, toy.repset, g);
  EXPECT_LT((a.probabilities - b.probabilities).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ConditionalPopt, ConcentratesWithDenseData) {
  const RepresentativeSet r = select_representative_points(4, 2);
  const KernelParams p = params_2d(1.0, 0.2, 0.4, 1e-4);
  // Worst cases 1.0, 0.2, 0.8, 0.9: the minimizer is point 1 by a wide margin.
  Dataset d{r.joint_locations, Eigen::VectorXd(8)};
  d.observations << 1.0, 0.1, -0.5, 0.2, 0.8, 0.3, 0.0, 0.9;
  const GpPosterior gp = GpPosterior::fit(d, p);
  const MarginalPrediction m = gp.predict_marginal(r.joint_locations);
  ASSERT_LT(5.0 * std::sqrt(m.variance.maxCoeff()), 0.1);
  Rng rng(8);
  const OptimumDistribution dist = p_opt(gp, r, sample_argmax_functions(gp, r, 10, rng));
  expect_valid(dist);
  EXPECT_GT(dist.probabilities(1), 0.99);
}

TEST(Popt, SingleSampleEqualsConditional) {
  Toy toy;
  const ArgmaxSample g{{0, 1, 0}};
  EXPECT_EQ(p_opt(toy.gp, toy.repset, {g}).probabilities,
            conditional_popt(toy.gp, toy.repset, g).probabilities);
  EXPECT_LT((p_opt(toy.gp, toy.repset, {g, g, g}).probabilities -
             conditional_popt(toy.gp, toy.repset, g).probabilities)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_THROW(p_opt(toy.gp, toy.repset, {}), InvalidArgument);
}

TEST(Popt, AveragesConditionals) {
  Toy toy;
  const ArgmaxSample g1{{0, 1, 0}}, g2{{1, 1, 0}};
  const Eigen::VectorXd expected = 0.5 * (conditional_popt(toy.gp, toy.repset, g1).probabilities +
                                          conditional_popt(toy.gp, toy.repset, g2).probabilities);
  EXPECT_LT((p_opt(toy.gp, toy.repset, {g1, g2}).probabilities - expected).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(ConditionalPopt, PinsTheMinimizerWithoutUncertainty) {
  const RepresentativeSet r = select_representative_points(2, 2);
  Prediction joint{Eigen::Vector4d(0.0, 1.0, 2.0, 0.0), 1e-6 * Eigen::Matrix4d::Identity()};
  // Worst cases 1 and 2.
  const OptimumDistribution a = conditional_popt(joint, r, {{1, 0}});
  EXPECT_GT(a.probabilities(0), 1.0 - 1e-9);
  // Worst cases 2 and 1.
  joint.mean << 0.0, 2.0, 1.0, 0.0;
  const OptimumDistribution b = conditional_popt(joint, r, {{1, 0}});
  EXPECT_GT(b.probabilities(1), 1.0 - 1e-9);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy({Eigen::Vector4d::Constant(0.25)}), std::log(4.0), 1e-15);
  EXPECT_NEAR(std::log(4.0), 1.386294, 1e-6);
  EXPECT_EQ(entropy({Eigen::Vector3d(0.0, 1.0, 0.0)}), 0.0);
  EXPECT_NEAR(entropy({Eigen::Vector2d(0.5, 0.5)}), std::log(2.0), 1e-15);
}

TEST(EsAcquisition, UncorrelatedCandidateCarriesNoInformation) {
  const KernelParams p = params_2d(1.0, 0.01, 0.01, 1e-3);
  Dataset d{Eigen::MatrixXd(2, 2), Eigen::Vector2d(0.2, -0.3)};
  d.locations << 0.0, 0.0, 0.5, 1.0;
  const GpPosterior gp = GpPosterior::fit(d, p);
  const RepresentativeSet r = select_representative_points(3, 2);
  Rng rng(9);
  const Eigen::MatrixXd z = standard_normals(10, r.layout.size(), rng);
  EXPECT_NEAR(es_acquisition(gp, {0.25, 0}, r, z), 0.0, 1e-3);
  EXPECT_NEAR(es_acquisition(gp, {0.75, 1}, r, z), 0.0, 1e-3);
}

TEST(ConditionalPopt, InvariantToRelabelingRepresentatives) {
  Toy toy;
  const Prediction joint = toy.gp.predict(toy.repset.joint_locations);
  const std::vector<Eigen::Index> perm{2, 0, 1};
  Eigen::VectorXd thetas(3);
  for (Eigen::Index i = 0; i < 3; ++i) thetas(i) = toy.repset.thetas(perm[i]);
  const RepresentativeSet permuted = make_representative_set(thetas, 2);
  const Prediction permuted_joint = toy.gp.predict(permuted.joint_locations);
  for (const ArgmaxSample& g : {ArgmaxSample{{0, 0, 1}}, ArgmaxSample{{1, 0, 1}}}) {
    ArgmaxSample gp;
    for (Eigen::Index i = 0; i < 3; ++i) gp.assignment.push_back(g.assignment[perm[i]]);
    const OptimumDistribution a = conditional_popt(joint, toy.repset, g);
    const OptimumDistribution b = conditional_popt(permuted_joint, permuted, gp);
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(b.probabilities(i), a.probabilities(perm[i]), 1e-6);
  }
}

TEST(EsAcquisition, InvariantToRelabelingRepresentatives) {
  // Relabeling changes which normals feed which location, so only the Monte
  // Carlo limit is invariant; a large argmax sample keeps the gap small.
  Toy toy;
  EsOptions options;
  options.argmax_samples = 2000;
  Rng rng(10);
  const Eigen::MatrixXd z = standard_normals(2000, 6, rng);
  const std::vector<Eigen::Index> perm{2, 0, 1};
  Eigen::VectorXd thetas(3);
  for (Eigen::Index i = 0; i < 3; ++i) thetas(i) = toy.repset.thetas(perm[i]);
  const RepresentativeSet permuted = make_representative_set(thetas, 2);
  for (const Location c : {Location{0.3, 0}, Location{0.8, 1}}) {
    EsDiagnostics diag;
    const double a = es_acquisition(toy.gp, c, toy.repset, z, options, &diag);
    const double b = es_acquisition(toy.gp, c, permuted, z, options);
    EXPECT_NEAR(a, b, 0.02);
    EXPECT_GT(diag.distributions, 0);
    EXPECT_LT(diag.max_sum_error, 1e-9);
    EXPECT_LE(diag.max_entropy_excess, 1e-12);
  }
}

TEST(EsAcquisition, MatchesNestedMonteCarlo) {
  Toy toy;
  const Location candidate{0.3, 1};
  const Eigen::Vector2d x(candidate.theta, 1.0);
  EsOptions options;
  options.argmax_samples = 2000;
  Rng rng(11);
  const Eigen::MatrixXd argmax_normals = standard_normals(2000, 6, rng);
  const double es = es_acquisition(toy.gp, candidate, toy.repset, argmax_normals, options);

  // Outer: 200 fictive observations; inner: minimizer frequencies of joint draws.
  const Eigen::MatrixXd inner = standard_normals(20000, 6, rng);
  const double current =
      entropy({minimizer_frequency(toy.gp.predict(toy.repset.joint_locations), toy.repset.layout,
                                   inner)});
  const MarginalPrediction at_x = toy.gp.predict_marginal(x.transpose());
  const double sd = std::sqrt(at_x.variance(0) + 1e-6);
  std::normal_distribution<double> normal;
  double expected = 0.0;
  const int outer = 200;
  for (int k = 0; k < outer; ++k) {
    const GpPosterior f = toy.gp.fantasize(x, at_x.mean(0) + sd * normal(rng));
    expected +=
        entropy({minimizer_frequency(f.predict(toy.repset.joint_locations), toy.repset.layout,
                                     inner)}) /
        outer;
  }
  EXPECT_GT(current - expected, 0.05);
  EXPECT_NEAR(es, current - expected, 0.05);
}

TEST(EntropySearch, CurrentDistributionIsValid) {
  Toy toy;
  Rng rng(12);
  EntropySearch es(toy.gp, toy.repset, {}, rng);
  expect_valid(es.current_distribution());
  EXPECT_NEAR(es.current_entropy(), entropy(es.current_distribution()), 1e-15);
  EXPECT_THROW(es.score({1.5, 0}), InvalidArgument);
  EXPECT_THROW(es.score({0.5, 2}), InvalidArgument);
  EXPECT_THROW(EntropySearch(toy.gp, toy.repset, {}, Eigen::MatrixXd::Zero(3, 5)),
               InvalidArgument);
}

TEST(EntropySearch, UnscreenedSelectIsTheBestScore) {
  Toy toy;
  EsOptions options;
  options.screen_count = 0;
  Rng rng(13);
  const Eigen::MatrixXd z = standard_normals(10, 6, rng);
  EntropySearch es(toy.gp, toy.repset, options, z);
  const Eigen::VectorXd grid = uniform_grid(5);
  double best = -1e300;
  Location arg;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    for (int s = 0; s < 2; ++s) {
      const double v = es_acquisition(toy.gp, {grid(i), s}, toy.repset, z, options);
      if (v > best) {
        best = v;
        arg = {grid(i), s};
      }
    }
  EXPECT_EQ(es.select(grid), arg);
}

TEST(EntropySearch, ScreeningKeepsTheTopProxyCandidates) {
  Toy toy;
  Rng rng(14);
  const Eigen::MatrixXd z = standard_normals(10, 6, rng);
  EsOptions one;
  one.screen_count = 1;
  EntropySearch es(toy.gp, toy.repset, one, z);
  const Eigen::VectorXd grid = uniform_grid(11);
  double best = -1.0;
  Location arg;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    for (int s = 0; s < 2; ++s) {
      const double v = es.screening_score({grid(i), s});
      EXPECT_GE(v, 0.0);
      if (v > best) {
        best = v;
        arg = {grid(i), s};
      }
    }
  EXPECT_EQ(es.select(grid), arg);
}

TEST(EntropySearch, ScreeningIgnoresUncorrelatedCandidates) {
  const KernelParams p = params_2d(1.0, 0.01, 0.01, 1e-3);
  const GpPosterior gp = GpPosterior::prior(p);
  Rng rng(15);
  EntropySearch es(gp, select_representative_points(3, 2), {}, rng);
  EXPECT_LT(es.screening_score({0.25, 0}), 1e-100);
  EXPECT_GT(es.screening_score({0.5, 0}) + es.screening_score({0.5, 1}), 0.1);
}

}  // namespace
}  // namespace minmaxbo
