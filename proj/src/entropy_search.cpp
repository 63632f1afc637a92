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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace minmaxbo {

namespace {

constexpr double kNegligibleLogProbability = -32.236191301916641;          // log(1e-14)
constexpr double kNegligibleRelativeLogProbability = -18.420680743952367;  // log(1e-8)
constexpr double kRefineRelativeLogProbability = -6.9077552789821368;       // log(1e-3)

double relative_jitter(const Eigen::MatrixXd& cov) {
  return 1e-10 * (cov.size() > 0 ? std::max(cov.diagonal().maxCoeff(), 1e-300) : 1.0);
}

void check_sample(const RepresentativeSet& repset, const ArgmaxSample& g) {
  if (static_cast<Eigen::Index>(g.assignment.size()) != repset.layout.theta_count)
    throw InvalidArgument("argmax sample does not cover every representative point");
  for (int s : g.assignment)
    if (s < 0 || s >= repset.layout.slice_count)
      throw InvalidArgument("argmax sample assigns an invalid slice");
}

void count_run(const EpResult& r, EsDiagnostics* diagnostics) {
  if (diagnostics == nullptr) return;
  ++diagnostics->ep_runs;
  if (!r.converged) ++diagnostics->ep_divergences;
  diagnostics->skipped_site_updates += r.skipped_updates;
}

OptimumDistribution normalize_log_weights(const Eigen::VectorXd& log_z,
                                          EsDiagnostics* diagnostics) {
  const Eigen::Index n = log_z.size();
  OptimumDistribution out;
  const double top = log_z.maxCoeff();
  if (!std::isfinite(top) || top < std::log(1e-300)) {
    if (diagnostics != nullptr) ++diagnostics->uniform_fallbacks;
    out.probabilities = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return out;
  }
  out.probabilities.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.probabilities(i) = std::isfinite(log_z(i)) ? std::exp(log_z(i) - top) : 0.0;
  out.probabilities /= out.probabilities.sum();
  return out;
}

std::vector<LinearConstraint> consistency_constraints(const RepresentativeSet& repset,
                                                      const ArgmaxSample& g) {
  const JointLayout& layout = repset.layout;
  std::vector<LinearConstraint> out;
  out.reserve(layout.theta_count * (layout.slice_count - 1));
  for (Eigen::Index i = 0; i < layout.theta_count; ++i) {
    const int worst = g.assignment[i];
    for (int s = 0; s < layout.slice_count; ++s)
      if (s != worst) out.push_back({layout.flat(i, worst), layout.flat(i, s)});
  }
  return out;
}

}  // namespace

RepresentativeSet make_representative_set(const Eigen::VectorXd& thetas, int slice_count,
                                          Eigen::Index dimension_cap) {
  if (thetas.size() < 1) throw InvalidArgument("representative set is empty");
  if (slice_count < 2) throw InvalidArgument("representative set needs at least two slices");
  if (thetas.size() * slice_count > dimension_cap)
    throw InvalidArgument("representative set has " + std::to_string(thetas.size() * slice_count) +
                          " joint locations, above the EP dimension cap " +
                          std::to_string(dimension_cap));
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    if (thetas(i) < 0.0 || thetas(i) > 1.0)
      throw InvalidArgument("representative theta outside [0,1]");
    for (Eigen::Index j = 0; j < i; ++j)
      if (thetas(i) == thetas(j)) throw InvalidArgument("representative thetas must be distinct");
  }
  RepresentativeSet out;
  out.thetas = thetas;
  out.layout = {thetas.size(), slice_count};
  out.joint_locations = joint_locations(thetas, slice_count);
  return out;
}

RepresentativeSet select_representative_points(int count, int slice_count,
                                               Eigen::Index dimension_cap) {
  if (count < 2) throw InvalidArgument("need at least two representative points");
  return make_representative_set(uniform_grid(count), slice_count, dimension_cap);
}

void EsDiagnostics::record(const OptimumDistribution& p) {
  const Eigen::Index n = p.probabilities.size();
  ++distributions;
  max_sum_error = std::max(max_sum_error, std::abs(p.probabilities.sum() - 1.0));
  min_entry = std::min(min_entry, p.probabilities.minCoeff());
  max_entry = std::max(max_entry, p.probabilities.maxCoeff());
  max_entropy_excess =
      std::max(max_entropy_excess, entropy(p) - std::log(static_cast<double>(n)));
}

void EsDiagnostics::merge(const EsDiagnostics& other) {
  ep_runs += other.ep_runs;
  ep_divergences += other.ep_divergences;
  skipped_site_updates += other.skipped_site_updates;
  uniform_fallbacks += other.uniform_fallbacks;
  distributions += other.distributions;
  max_sum_error = std::max(max_sum_error, other.max_sum_error);
  min_entry = std::min(min_entry, other.min_entry);
  max_entry = std::max(max_entry, other.max_entry);
  max_entropy_excess = std::max(max_entropy_excess, other.max_entropy_excess);
}

std::vector<LinearConstraint> build_constraints(const RepresentativeSet& repset,
                                                const ArgmaxSample& g, Eigen::Index i_star) {
  check_sample(repset, g);
  const JointLayout& layout = repset.layout;
  if (i_star < 0 || i_star >= layout.theta_count)
    throw InvalidArgument("build_constraints: i_star out of range");
  std::vector<LinearConstraint> out = consistency_constraints(repset, g);
  const Eigen::Index best = layout.flat(i_star, g.assignment[i_star]);
  for (Eigen::Index i = 0; i < layout.theta_count; ++i)
    if (i != i_star) out.push_back({layout.flat(i, g.assignment[i]), best});
  return out;
}

std::vector<ArgmaxSample> argmax_functions(const Prediction& joint, const RepresentativeSet& repset,
                                           const Eigen::MatrixXd& normals, double jitter_scale) {
  const Eigen::MatrixXd draws = sample_gaussian(joint.mean, joint.covariance, normals, jitter_scale);
  std::vector<ArgmaxSample> out;
  out.reserve(draws.rows());
  for (Eigen::Index r = 0; r < draws.rows(); ++r)
    out.push_back(argmax_from_sample(draws.row(r).transpose(), repset.layout));
  return out;
}

std::vector<ArgmaxSample> sample_argmax_functions(const GpPosterior& gp,
                                                  const RepresentativeSet& repset, int count,
                                                  Rng& rng) {
  if (count < 1) throw InvalidArgument("sample_argmax_functions: count must be >= 1");
  const Prediction joint = gp.predict(repset.joint_locations);
  const Eigen::MatrixXd z = standard_normals(count, joint.mean.size(), rng);
  const double s2 = gp.params().signal_std * gp.params().signal_std;
  return argmax_functions(joint, repset, z, s2);
}

OptimumDistribution conditional_popt(const Prediction& joint, const RepresentativeSet& repset,
                                     const ArgmaxSample& g, const EsOptions& options,
                                     EsDiagnostics* diagnostics) {
  check_sample(repset, g);
  const JointLayout& layout = repset.layout;
  const Eigen::Index n = layout.theta_count;
  if (joint.mean.size() != layout.size() || joint.covariance.rows() != layout.size())
    throw InvalidArgument("conditional_popt: predictive does not match the representative set");
  if (n == 1) {
    OptimumDistribution single{Eigen::VectorXd::Ones(1)};
    if (diagnostics != nullptr) diagnostics->record(single);
    return single;
  }
  const double jitter = relative_jitter(joint.covariance);

  // Argmax-consistency sites are shared by every i*.
  const std::vector<LinearConstraint> consistency = consistency_constraints(repset, g);
  Eigen::VectorXd m;
  Eigen::MatrixXd b;
  constraint_moments(joint.mean, joint.covariance, consistency, jitter, m, b);
  const EpResult base = ep_orthant(m, b, options.ep);
  count_run(base, diagnostics);

  Eigen::VectorXd log_z = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());

  {
    // Worst-case values w_i = f(theta_i, g_i) under the consistency-conditioned Gaussian.
    std::vector<Eigen::Index> worst(n);
    for (Eigen::Index i = 0; i < n; ++i) worst[i] = layout.flat(i, g.assignment[i]);
    auto cv = [&](Eigen::Index a, Eigen::Index c) {
      return joint.covariance(a, c) + (a == c ? jitter : 0.0);
    };
    Eigen::VectorXd w_mean(n);
    Eigen::MatrixXd w_cov(n, n);
    Eigen::MatrixXd cross(n, static_cast<Eigen::Index>(consistency.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
      w_mean(i) = joint.mean(worst[i]);
      for (Eigen::Index j = 0; j < n; ++j) w_cov(i, j) = cv(worst[i], worst[j]);
      for (Eigen::Index c = 0; c < cross.cols(); ++c)
        cross(i, c) = cv(worst[i], consistency[c].plus) - cv(worst[i], consistency[c].minus);
    }
    const Prediction w = condition_on_sites(w_mean, w_cov, cross, m, b, base.sites);

    // Upper bound P(all d_k >= 0) <= min_k P(d_k >= 0) with d_k = w_k - w_i*.
    Eigen::VectorXd bound = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i_star = 0; i_star < n; ++i_star)
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i_star) continue;
        const double var = std::max(w.covariance(k, k) - 2.0 * w.covariance(k, i_star) +
                                         w.covariance(i_star, i_star),
                                     0.0) +
                           2.0 * jitter;
        bound(i_star) = std::min(bound(i_star),
                                 log_normal_cdf((w.mean(k) - w.mean(i_star)) / std::sqrt(var)));
      }
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index c) { return bound(a) > bound(c); });

    Eigen::VectorXd md(n - 1);
    Eigen::MatrixXd bd(n - 1, n - 1);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<EpSites> difference_sites(options.refine_consistency ? n : 0);
    for (const Eigen::Index i_star : order) {
      // Points whose bound is negligible next to the best mass found so far are skipped.
      if (bound(i_star) < kNegligibleLogProbability ||
          bound(i_star) < best + kNegligibleRelativeLogProbability)
        continue;
      Eigen::Index row = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i_star) continue;
        md(row) = w.mean(k) - w.mean(i_star);
        Eigen::Index col = 0;
        for (Eigen::Index l = 0; l < n; ++l) {
          if (l == i_star) continue;
          bd(row, col) = w.covariance(k, l) - w.covariance(k, i_star) -
                         w.covariance(i_star, l) + w.covariance(i_star, i_star);
          ++col;
        }
        bd(row, row) = std::max(bd(row, row), 0.0) + 2.0 * jitter;
        ++row;
      }
      const EpResult r = ep_orthant(md, bd, options.ep);
      count_run(r, diagnostics);
      log_z(i_star) = r.log_probability;
      best = std::max(best, r.log_probability);
      if (options.refine_consistency) difference_sites[i_star] = r.sites;
    }

    if (options.refine_consistency) {
      // Joint EP over consistency and minimizer constraints for every point
      // within a factor 1e3 of the largest mass, warm-started from the two-stage sites. Constraint
      // k of build_constraints after the consistency block is w_k - w_i*.
      const double top = log_z.maxCoeff();
      for (Eigen::Index i_star = 0; i_star < n; ++i_star) {
        if (!(log_z(i_star) >= top + kRefineRelativeLogProbability)) continue;
        const std::vector<LinearConstraint> all = build_constraints(repset, g, i_star);
        Eigen::VectorXd m_all;
        Eigen::MatrixXd b_all;
        constraint_moments(joint.mean, joint.covariance, all, jitter, m_all, b_all);
        const Eigen::Index nc = base.sites.precision.size();
        EpSites warm = EpSites::zeros(static_cast<Eigen::Index>(all.size()));
        warm.precision.head(nc) = base.sites.precision;
        warm.shift.head(nc) = base.sites.shift;
        warm.precision.tail(n - 1) = difference_sites[i_star].precision;
        warm.shift.tail(n - 1) = difference_sites[i_star].shift;
        const EpResult r = ep_orthant(m_all, b_all, options.ep, &warm);
        count_run(r, diagnostics);
        // Divide out the consistency mass so refined and two-stage values stay comparable.
        log_z(i_star) = r.log_probability - base.log_probability;
      }
    }
  }

  OptimumDistribution out = normalize_log_weights(log_z, diagnostics);
  if (diagnostics != nullptr) diagnostics->record(out);
  return out;
}

OptimumDistribution conditional_popt(const GpPosterior& gp, const RepresentativeSet& repset,
                                     const ArgmaxSample& g, const EsOptions& options,
                                     EsDiagnostics* diagnostics) {
  return conditional_popt(gp.predict(repset.joint_locations), repset, g, options, diagnostics);
}

OptimumDistribution p_opt(const Prediction& joint, const RepresentativeSet& repset,
                          const std::vector<ArgmaxSample>& samples, const EsOptions& options,
                          EsDiagnostics* diagnostics) {
  if (samples.empty()) throw InvalidArgument("p_opt: need at least one argmax sample");
  std::map<std::vector<int>, Eigen::VectorXd> solved;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(repset.layout.theta_count);
  for (const ArgmaxSample& g : samples) {
    auto it = solved.find(g.assignment);
    if (it == solved.end())
      it = solved
               .emplace(g.assignment,
                        conditional_popt(joint, repset, g, options, diagnostics).probabilities)
               .first;
    total += it->second;
  }
  OptimumDistribution out{total / static_cast<double>(samples.size())};
  if (diagnostics != nullptr) diagnostics->record(out);
  return out;
}

OptimumDistribution p_opt(const GpPosterior& gp, const RepresentativeSet& repset,
                          const std::vector<ArgmaxSample>& samples, const EsOptions& options,
                          EsDiagnostics* diagnostics) {
  return p_opt(gp.predict(repset.joint_locations), repset, samples, options, diagnostics);
}

double entropy(const OptimumDistribution& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.probabilities.size(); ++i) {
    const double v = p.probabilities(i);
    if (v > 0.0) h -= v * std::log(v);
  }
  return std::max(h, 0.0);
}

EntropySearch::EntropySearch(const GpPosterior& gp, RepresentativeSet repset, EsOptions options,
                             Eigen::MatrixXd argmax_normals)
    : gp_(gp),
      repset_(std::move(repset)),
      options_(options),
      normals_(std::move(argmax_normals)),
      rule_(gauss_hermite(options.quadrature_nodes)) {
  if (normals_.rows() < 1 || normals_.cols() != repset_.layout.size())
    throw InvalidArgument("EntropySearch: argmax normals must be M x (N * |Z|)");
  joint_ = gp_.predict(repset_.joint_locations);
  const double s2 = gp_.params().signal_std * gp_.params().signal_std;
  const std::vector<ArgmaxSample> samples = argmax_functions(joint_, repset_, normals_, s2);
  current_ = p_opt(joint_, repset_, samples, options_, &diagnostics_);
  entropy_ = entropy(current_);
  pair_mass_ = Eigen::VectorXd::Zero(repset_.layout.size());
  for (const ArgmaxSample& g : samples)
    for (Eigen::Index i = 0; i < repset_.layout.theta_count; ++i)
      pair_mass_(repset_.layout.flat(i, g.assignment[i])) +=
          current_.probabilities(i) / static_cast<double>(samples.size());
}

EntropySearch::EntropySearch(const GpPosterior& gp, RepresentativeSet repset, EsOptions options,
                             Rng& rng)
    : EntropySearch(gp, repset, options,
                    standard_normals(options.argmax_samples, repset.layout.size(), rng)) {}

Eigen::Vector2d EntropySearch::candidate_point(const Location& candidate) const {
  const int slices = repset_.layout.slice_count;
  if (candidate.slice < 0 || candidate.slice >= slices || candidate.theta < 0.0 ||
      candidate.theta > 1.0)
    throw InvalidArgument("EntropySearch: candidate outside the search space");
  return {candidate.theta, static_cast<double>(candidate.slice) / (slices - 1)};
}

double EntropySearch::screening_score(const Location& candidate) const {
  const FantasyEffect effect =
      gp_.fantasy_effect(repset_.joint_locations, candidate_point(candidate));
  double total = 0.0;
  for (Eigen::Index j = 0; j < pair_mass_.size(); ++j) {
    const double var = joint_.covariance(j, j);
    if (pair_mass_(j) > 0.0 && var > 0.0)
      total += pair_mass_(j) * effect.direction(j) * effect.direction(j) / var;
  }
  return total;
}

double EntropySearch::score(const Location& candidate) {
  const FantasyEffect effect =
      gp_.fantasy_effect(repset_.joint_locations, candidate_point(candidate));
  if (effect.direction.squaredNorm() == 0.0) return 0.0;

  Prediction fantasy;
  fantasy.covariance = joint_.covariance;
  fantasy.covariance.noalias() -= effect.direction * effect.direction.transpose();
  fantasy.covariance.diagonal() = fantasy.covariance.diagonal().cwiseMax(0.0);
  const double s2 = gp_.params().signal_std * gp_.params().signal_std;
  const Eigen::MatrixXd factor =
      cholesky_with_jitter(fantasy.covariance, s2, "fantasized joint covariance");
  const Eigen::MatrixXd centered = normals_ * factor.transpose();

  double expected = 0.0;
  std::vector<ArgmaxSample> samples(normals_.rows());
  for (std::size_t k = 0; k < rule_.nodes.size(); ++k) {
    fantasy.mean = joint_.mean + effect.direction * rule_.nodes[k];
    for (Eigen::Index r = 0; r < centered.rows(); ++r)
      samples[r] = argmax_from_sample(centered.row(r).transpose() + fantasy.mean, repset_.layout);
    expected += rule_.weights[k] * entropy(p_opt(fantasy, repset_, samples, options_, &diagnostics_));
  }
  return entropy_ - expected;
}

Location EntropySearch::select(const Eigen::VectorXd& candidate_thetas) {
  if (candidate_thetas.size() == 0) throw InvalidArgument("EntropySearch::select: no candidates");
  std::vector<Location> candidates;
  for (Eigen::Index i = 0; i < candidate_thetas.size(); ++i)
    for (int s = 0; s < repset_.layout.slice_count; ++s)
      candidates.push_back({candidate_thetas(i), s});
  const std::size_t keep = options_.screen_count > 0
                               ? std::min(candidates.size(),
                                          static_cast<std::size_t>(options_.screen_count))
                               : candidates.size();
  if (keep < candidates.size()) {
    std::vector<double> proxy(candidates.size());
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      proxy[c] = screening_score(candidates[c]);
      order[c] = c;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return proxy[a] > proxy[b]; });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    std::vector<Location> kept;
    for (std::size_t c : order) kept.push_back(candidates[c]);
    candidates = std::move(kept);
  }
  Location best = candidates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (const Location& candidate : candidates) {
    const double value = score(candidate);
    if (value > best_score) {
      best_score = value;
      best = candidate;
    }
  }
  return best;
}

double es_acquisition(const GpPosterior& gp, const Location& candidate,
                      const RepresentativeSet& repset, const Eigen::MatrixXd& argmax_normals,
                      const EsOptions& options, EsDiagnostics* diagnostics) {
  EntropySearch es(gp, repset, options, argmax_normals);
  const double value = es.score(candidate);
  if (diagnostics != nullptr) diagnostics->merge(es.diagnostics());
  return value;
}

}  // namespace minmaxbo
