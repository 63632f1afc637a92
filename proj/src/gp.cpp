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

#include "minmaxbo/gp.hpp"

#include <cmath>
#include <string>

namespace minmaxbo {

void KernelParams::validate() const {
  if (!(signal_std > 0.0)) throw InvalidArgument("KernelParams: signal_std must be > 0");
  if (!(noise_std > 0.0)) throw InvalidArgument("KernelParams: noise_std must be > 0");
  if (lengthscales.size() == 0) throw InvalidArgument("KernelParams: no lengthscales");
  for (Eigen::Index d = 0; d < lengthscales.size(); ++d)
    if (!(lengthscales(d) > 0.0))
      throw InvalidArgument("KernelParams: lengthscales must be > 0");
}

void Dataset::validate() const {
  if (locations.rows() != observations.size())
    throw InvalidArgument("Dataset: " + std::to_string(locations.rows()) +
                          " locations but " + std::to_string(observations.size()) +
                          " observations");
  if (locations.size() > 0 &&
      (locations.minCoeff() < 0.0 || locations.maxCoeff() > 1.0))
    throw InvalidArgument("Dataset: locations must lie in the unit box");
}

Dataset Dataset::extended(const Eigen::VectorXd& location, double observation) const {
  Dataset out;
  const Eigen::Index n = size();
  const Eigen::Index dim = n > 0 ? locations.cols() : location.size();
  if (location.size() != dim) throw InvalidArgument("Dataset: dimension mismatch");
  out.locations.resize(n + 1, dim);
  out.observations.resize(n + 1);
  if (n > 0) {
    out.locations.topRows(n) = locations;
    out.observations.head(n) = observations;
  }
  out.locations.row(n) = location.transpose();
  out.observations(n) = observation;
  return out;
}

double kernel_eval(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b,
                   const KernelParams& params) {
  if (a.size() != params.dimension() || b.size() != params.dimension())
    throw InvalidArgument("kernel_eval: point dimension does not match lengthscales");
  const double r2 = ((a - b).array() / params.lengthscales.array()).square().sum();
  return params.signal_std * params.signal_std * std::exp(-0.5 * r2);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const KernelParams& params) {
  if (a.cols() != params.dimension() || b.cols() != params.dimension())
    throw InvalidArgument("kernel_matrix: point dimension does not match lengthscales");
  const Eigen::RowVectorXd inv_l = params.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd as = a.array().rowwise() * inv_l.array();
  const Eigen::MatrixXd bs = b.array().rowwise() * inv_l.array();
  const double s2 = params.signal_std * params.signal_std;
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      k(i, j) = s2 * std::exp(-0.5 * (as.row(i) - bs.row(j)).squaredNorm());
  return k;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& m, double scale,
                                     const char* what, double* used_jitter) {
  const Eigen::Index n = m.rows();
  if (n == 0) {
    if (used_jitter) *used_jitter = 0.0;
    return Eigen::MatrixXd(0, 0);
  }
  for (double jitter = 1e-10 * scale; jitter <= 1e-6 * scale * (1.0 + 1e-9);
       jitter *= 100.0) {
    Eigen::MatrixXd shifted = m;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if (l.allFinite()) {
        if (used_jitter) *used_jitter = jitter;
        return l;
      }
    }
  }
  throw NumericalError(std::string(what) +
                       ": matrix is not positive definite even with jitter " +
                       std::to_string(1e-6 * scale) + " (ill-conditioned, size " +
                       std::to_string(n) + ")");
}

GpPosterior::GpPosterior(Dataset data, KernelParams params)
    : data_(std::move(data)), params_(std::move(params)) {}

GpPosterior GpPosterior::prior(KernelParams params) {
  params.validate();
  GpPosterior gp(Dataset{Eigen::MatrixXd(0, params.dimension()), Eigen::VectorXd(0)},
                 std::move(params));
  return gp;
}

GpPosterior GpPosterior::fit(Dataset data, KernelParams params) {
  params.validate();
  data.validate();
  if (data.size() == 0) throw InvalidArgument("fit: dataset is empty");
  if (data.locations.cols() != params.dimension())
    throw InvalidArgument("fit: location dimension does not match lengthscales");
  GpPosterior gp(std::move(data), std::move(params));
  Eigen::MatrixXd gram = kernel_matrix(gp.data_.locations, gp.data_.locations, gp.params_);
  gram.diagonal().array() += gp.params_.noise_std * gp.params_.noise_std;
  gp.factor_ = cholesky_with_jitter(gram, gp.params_.signal_std * gp.params_.signal_std,
                                    "GP Gram matrix", &gp.jitter_);
  gp.alpha_ = gp.factor_.triangularView<Eigen::Lower>().solve(gp.data_.observations);
  gp.factor_.transpose().triangularView<Eigen::Upper>().solveInPlace(gp.alpha_);
  return gp;
}

void GpPosterior::check_queries(const Eigen::MatrixXd& queries) const {
  if (queries.cols() != params_.dimension() && queries.rows() > 0)
    throw InvalidArgument("GpPosterior: query dimension does not match lengthscales");
}

Prediction GpPosterior::predict(const Eigen::MatrixXd& queries) const {
  check_queries(queries);
  Prediction out;
  if (queries.rows() == 0) {
    out.mean.resize(0);
    out.covariance.resize(0, 0);
    return out;
  }
  out.covariance = kernel_matrix(queries, queries, params_);
  if (data_.size() == 0) {
    out.mean = Eigen::VectorXd::Zero(queries.rows());
  } else {
    const Eigen::MatrixXd kxq = kernel_matrix(data_.locations, queries, params_);
    out.mean = kxq.transpose() * alpha_;
    const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(kxq);
    out.covariance.noalias() -= v.transpose() * v;
  }
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.covariance.diagonal() = out.covariance.diagonal().cwiseMax(0.0);
  return out;
}

MarginalPrediction GpPosterior::predict_marginal(const Eigen::MatrixXd& queries) const {
  check_queries(queries);
  MarginalPrediction out;
  const double s2 = params_.signal_std * params_.signal_std;
  out.variance = Eigen::VectorXd::Constant(queries.rows(), s2);
  if (data_.size() == 0 || queries.rows() == 0) {
    out.mean = Eigen::VectorXd::Zero(queries.rows());
    return out;
  }
  const Eigen::MatrixXd kxq = kernel_matrix(data_.locations, queries, params_);
  out.mean = kxq.transpose() * alpha_;
  const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(kxq);
  out.variance -= v.colwise().squaredNorm().transpose();
  out.variance = out.variance.cwiseMax(0.0);
  return out;
}

Eigen::VectorXd GpPosterior::predict_mean(const Eigen::MatrixXd& queries) const {
  check_queries(queries);
  if (data_.size() == 0 || queries.rows() == 0) return Eigen::VectorXd::Zero(queries.rows());
  return kernel_matrix(queries, data_.locations, params_) * alpha_;
}

Eigen::MatrixXd sample_gaussian(const Eigen::VectorXd& mean,
                                const Eigen::MatrixXd& covariance,
                                const Eigen::MatrixXd& normals, double jitter_scale) {
  if (normals.cols() != mean.size())
    throw InvalidArgument("sample_gaussian: normals have the wrong width");
  const Eigen::MatrixXd l = cholesky_with_jitter(covariance, jitter_scale, "joint predictive covariance");
  Eigen::MatrixXd draws = normals * l.transpose();
  draws.rowwise() += mean.transpose();
  return draws;
}

Eigen::MatrixXd GpPosterior::sample_joint(const Eigen::MatrixXd& queries, int count,
                                          Rng& rng) const {
  if (count < 1) throw InvalidArgument("sample_joint: count must be >= 1");
  const Prediction pred = predict(queries);
  const Eigen::MatrixXd z = standard_normals(count, queries.rows(), rng);
  return sample_gaussian(pred.mean, pred.covariance, z,
                         params_.signal_std * params_.signal_std);
}

GpPosterior GpPosterior::fantasize(const Eigen::VectorXd& location, double y) const {
  if (location.size() != params_.dimension())
    throw InvalidArgument("fantasize: location dimension does not match lengthscales");
  if (location.minCoeff() < 0.0 || location.maxCoeff() > 1.0)
    throw InvalidArgument("fantasize: location must lie in the unit box");
  return fit(data_.extended(location, y), params_);
}

FantasyEffect GpPosterior::fantasy_effect(const Eigen::MatrixXd& queries,
                                          const Eigen::VectorXd& location) const {
  check_queries(queries);
  if (location.size() != params_.dimension())
    throw InvalidArgument("fantasy_effect: location dimension does not match lengthscales");
  const Eigen::MatrixXd x = location.transpose();
  Eigen::VectorXd cross = kernel_matrix(queries, x, params_).col(0);
  double var = params_.signal_std * params_.signal_std;
  double mean = 0.0;
  if (data_.size() > 0) {
    const auto l = factor_.triangularView<Eigen::Lower>();
    const Eigen::VectorXd kx = kernel_matrix(data_.locations, x, params_).col(0);
    const Eigen::VectorXd vx = l.solve(kx);
    const Eigen::MatrixXd vq = l.solve(kernel_matrix(data_.locations, queries, params_));
    cross.noalias() -= vq.transpose() * vx;
    var -= vx.squaredNorm();
    mean = kx.dot(alpha_);
  }
  var = std::max(var, 0.0);
  FantasyEffect effect;
  effect.mean = mean;
  effect.sd = std::sqrt(var + params_.noise_std * params_.noise_std);
  effect.direction = cross / effect.sd;
  return effect;
}

}  // namespace minmaxbo
