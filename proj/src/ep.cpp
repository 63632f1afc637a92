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

#include "minmaxbo/ep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minmaxbo/normal.hpp"

namespace minmaxbo {

namespace {

const double kLogFloor = std::log(1e-300);

// Factorization of I + S B S with S = diag(sqrt(site precision)).
struct SiteSystem {
  Eigen::VectorXd root;
  Eigen::MatrixXd sb;  // S B
  Eigen::LLT<Eigen::MatrixXd> llt;

  SiteSystem(const Eigen::MatrixXd& b, const EpSites& sites) {
    root = sites.precision.cwiseMax(0.0).cwiseSqrt();
    sb = root.asDiagonal() * b;
    Eigen::MatrixXd m = sb * root.asDiagonal();
    m.diagonal().array() += 1.0;
    llt.compute(m);
  }

  // M^{-1} S x, scaled back by S: S M^{-1} S x.
  Eigen::VectorXd sandwich(const Eigen::VectorXd& x) const {
    return root.cwiseProduct(llt.solve(root.cwiseProduct(x)));
  }
};

void posterior_from_sites(const Eigen::VectorXd& m, const Eigen::MatrixXd& b,
                          const EpSites& sites, const SiteSystem& sys, Eigen::VectorXd& mu,
                          Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd w = sys.llt.matrixL().solve(sys.sb);
  sigma = b;
  sigma.noalias() -= w.transpose() * w;
  const Eigen::VectorXd v = m + b * sites.shift;
  mu = v - b * sys.sandwich(v);
}

double log_normalizer(const Eigen::VectorXd& m, const Eigen::MatrixXd& b,
                      const EpSites& sites) {
  const Eigen::Index n = m.size();
  if (n == 0) return 0.0;
  const SiteSystem sys(b, sites);
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  posterior_from_sites(m, b, sites, sys, mu, sigma);

  const Eigen::MatrixXd l = sys.llt.matrixL();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  const Eigen::VectorXd r = sites.shift - sites.precision.cwiseProduct(m);
  const double quad = m.dot(r - sys.sandwich(b * r));
  double log_z = -0.5 * logdet + 0.5 * sites.shift.dot(mu) + 0.5 * quad;

  for (Eigen::Index c = 0; c < n; ++c) {
    const double tau = sites.precision(c);
    const double nu = sites.shift(c);
    const double s2 = std::max(sigma(c, c), 1e-300);
    const double keep = 1.0 - tau * s2;
    double cav_var = s2;
    double cav_mean = mu(c);
    if (keep > 1e-12) {
      cav_var = s2 / keep;
      cav_mean = (mu(c) - nu * s2) / keep;
    }
    const double log_hat = log_normal_cdf(cav_mean / std::sqrt(cav_var));
    const double denom = 1.0 + tau * cav_var;
    const double log_site = -0.5 * std::log(denom) +
                            (nu * nu * cav_var + 2.0 * nu * cav_mean - tau * cav_mean * cav_mean) /
                                (2.0 * denom);
    log_z += log_hat - log_site;
  }
  return log_z;
}

}  // namespace

void constraint_moments(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        const std::vector<LinearConstraint>& constraints, double jitter,
                        Eigen::VectorXd& m, Eigen::MatrixXd& b) {
  const Eigen::Index n = static_cast<Eigen::Index>(constraints.size());
  const Eigen::Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d)
    throw InvalidArgument("constraint_moments: covariance shape does not match the mean");
  for (const LinearConstraint& c : constraints) {
    if (c.plus < 0 || c.minus < 0 || c.plus >= d || c.minus >= d)
      throw InvalidArgument("constraint_moments: constraint index out of range");
    if (c.plus == c.minus)
      throw InvalidArgument("constraint_moments: constraint compares an index with itself");
  }
  auto cv = [&](Eigen::Index i, Eigen::Index j) { return cov(i, j) + (i == j ? jitter : 0.0); };
  m.resize(n);
  b.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const LinearConstraint& x = constraints[c];
    m(c) = mean(x.plus) - mean(x.minus);
    for (Eigen::Index e = 0; e <= c; ++e) {
      const LinearConstraint& y = constraints[e];
      const double v = cv(x.plus, y.plus) - cv(x.plus, y.minus) - cv(x.minus, y.plus) +
                       cv(x.minus, y.minus);
      b(c, e) = v;
      b(e, c) = v;
    }
  }
}

namespace {

struct SweepOutcome {
  bool converged = false;
  int sweeps = 0;
  long skipped = 0;
};

SweepOutcome run_sweeps(double damping, const EpOptions& options, EpSites& sites,
                        Eigen::VectorXd& mu, Eigen::MatrixXd& sigma) {
  const Eigen::Index n = mu.size();
  Eigen::VectorXd& tau = sites.precision;
  Eigen::VectorXd& nu = sites.shift;
  Eigen::VectorXd column(n);
  SweepOutcome out;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double worst_change = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double s2 = sigma(c, c);
      const double cav_tau = 1.0 / s2 - tau(c);
      const double cav_nu = mu(c) / s2 - nu(c);
      if (!(s2 > 0.0) || !(cav_tau > 0.0) || !std::isfinite(cav_nu)) {
        ++out.skipped;
        continue;
      }
      const double cav_var = 1.0 / cav_tau;
      const double cav_sd = std::sqrt(cav_var);
      const double cav_mean = cav_nu * cav_var;
      const double alpha = cav_mean / cav_sd;
      const double ratio = inverse_mills_ratio(alpha);
      const double hat_mean = cav_mean + cav_sd * ratio;
      const double hat_var = cav_var * (1.0 - ratio * (ratio + alpha));
      if (!(hat_var > 0.0) || !std::isfinite(hat_mean)) {
        ++out.skipped;
        continue;
      }
      const double target_tau = 1.0 / hat_var - cav_tau;
      const double target_nu = hat_mean / hat_var - cav_nu;
      if (target_tau < 0.0) {
        ++out.skipped;
        continue;
      }
      const double new_tau = (1.0 - damping) * tau(c) + damping * target_tau;
      const double new_nu = (1.0 - damping) * nu(c) + damping * target_nu;
      const double d_tau = new_tau - tau(c);
      const double d_nu = new_nu - nu(c);
      const double denom = 1.0 + d_tau * s2;
      if (!(denom > 0.0)) {
        ++out.skipped;
        continue;
      }
      // Only the lower triangle of sigma is kept current.
      column.head(c) = sigma.row(c).head(c).transpose();
      column.tail(n - c) = sigma.col(c).tail(n - c);
      mu.noalias() += column * ((d_nu - d_tau * mu(c)) / denom);
      sigma.selfadjointView<Eigen::Lower>().rankUpdate(column, -d_tau / denom);
      tau(c) = new_tau;
      nu(c) = new_nu;
      worst_change = std::max(worst_change,
                              std::abs(d_tau) / std::max(1.0, std::abs(new_tau)));
      worst_change = std::max(worst_change,
                              std::abs(d_nu) / std::max(1.0, std::abs(new_nu)));
    }
    out.sweeps = sweep;
    if (!std::isfinite(worst_change) || !mu.allFinite()) return out;
    if (worst_change < options.tolerance) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace

EpResult ep_orthant(const Eigen::VectorXd& m, const Eigen::MatrixXd& b,
                    const EpOptions& options, const EpSites* warm_start) {
  const Eigen::Index n = m.size();
  if (b.rows() != n || b.cols() != n)
    throw InvalidArgument("ep_orthant: covariance shape does not match the mean");
  if (!(options.damping > 0.0 && options.damping <= 1.0))
    throw InvalidArgument("ep_orthant: damping must lie in (0, 1]");
  if (options.max_sweeps < 1) throw InvalidArgument("ep_orthant: max_sweeps must be >= 1");
  EpResult result;
  result.sites = EpSites::zeros(n);
  if (n == 0) {
    result.converged = true;
    return result;
  }
  if (warm_start != nullptr) {
    if (warm_start->precision.size() != n || warm_start->shift.size() != n)
      throw InvalidArgument("ep_orthant: warm start has the wrong number of sites");
    result.sites = *warm_start;
    result.sites.precision = result.sites.precision.cwiseMax(0.0);
  }
  const EpSites initial = result.sites;

  auto attempt = [&](double damping) {
    result.sites = initial;
    Eigen::VectorXd mu = m;
    Eigen::MatrixXd sigma = b;
    if (warm_start != nullptr)
      posterior_from_sites(m, b, result.sites, SiteSystem(b, result.sites), mu, sigma);
    const SweepOutcome o = run_sweeps(damping, options, result.sites, mu, sigma);
    result.converged = o.converged;
    result.sweeps += o.sweeps;
    result.skipped_updates += o.skipped;
    result.log_probability = result.sites.precision.allFinite() && result.sites.shift.allFinite()
                                 ? log_normalizer(m, b, result.sites)
                                 : std::numeric_limits<double>::quiet_NaN();
    return o.converged && std::isfinite(result.log_probability);
  };

  bool ok = options.undamped_first && attempt(1.0);
  if (!ok && (options.damping < 1.0 || !options.undamped_first)) attempt(options.damping);
  if (!std::isfinite(result.log_probability)) {
    result.converged = false;
    result.log_probability = kLogFloor;
  }
  result.log_probability = std::min(result.log_probability, 0.0);
  result.probability = std::max(std::exp(result.log_probability), 1e-300);
  return result;
}

EpResult ep_probability(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                        const std::vector<LinearConstraint>& constraints,
                        const EpOptions& options) {
  const double scale = cov.size() > 0 ? std::max(cov.diagonal().maxCoeff(), 1e-300) : 1.0;
  Eigen::VectorXd m;
  Eigen::MatrixXd b;
  constraint_moments(mean, cov, constraints, 1e-10 * scale, m, b);
  return ep_orthant(m, b, options);
}

Prediction condition_on_sites(const Eigen::VectorXd& z_mean, const Eigen::MatrixXd& z_cov,
                              const Eigen::MatrixXd& cross, const Eigen::VectorXd& m,
                              const Eigen::MatrixXd& b, const EpSites& sites) {
  Prediction out{z_mean, z_cov};
  if (m.size() == 0) return out;
  const SiteSystem sys(b, sites);
  const Eigen::VectorXd v = m + b * sites.shift;
  out.mean.noalias() += cross * (sites.shift - sys.sandwich(v));
  const Eigen::MatrixXd w =
      sys.llt.matrixL().solve(sys.root.asDiagonal() * cross.transpose());
  out.covariance.noalias() -= w.transpose() * w;
  return out;
}

}  // namespace minmaxbo
