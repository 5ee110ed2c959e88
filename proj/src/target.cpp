#include "seqboed/target.hpp"

#include "seqboed/errors.hpp"

namespace seqboed {

SequentialTarget::SequentialTarget(Gaussian prior, Gaussian noise)
    : prior_(std::move(prior)), noise_(std::move(noise)), prior_density_(prior_) {
  noise_llt_.compute(noise_.cov());
  if (noise_llt_.info() != Eigen::Success)
    throw NumericalDegeneracyError("SequentialTarget: noise covariance not positive definite",
                                   0.0);
  gamma_inv_ = noise_llt_.solve(Matrix::Identity(noise_.dim(), noise_.dim()));
  Eigen::LLT<Matrix> prior_llt(prior_.cov());
  if (prior_llt.info() != Eigen::Success)
    throw NumericalDegeneracyError("SequentialTarget: prior covariance not positive definite",
                                   0.0);
  sigma0_inv_ = prior_llt.solve(Matrix::Identity(prior_.dim(), prior_.dim()));
}

void SequentialTarget::add_observation(Observation obs) {
  if (!obs.model) throw InvalidArgumentError("SequentialTarget: observation without model");
  if (obs.y.size() != obs.model->obs_dim())
    throw InvalidArgumentError("SequentialTarget: observation dimension mismatch");
  if (obs.y.size() != noise_.dim())
    throw InvalidArgumentError("SequentialTarget: observation does not match noise dimension");
  if (obs.model->param_dim() != prior_.dim())
    throw InvalidArgumentError("SequentialTarget: model parameter dimension mismatch");
  observations_.push_back(std::move(obs));
}

Matrix SequentialTarget::whiten(const Matrix& residuals_rows) const {
  return noise_llt_.matrixL().solve(residuals_rows.transpose()).transpose();
}

double SequentialTarget::potential(const Vector& u) const {
  double acc = 0.0;
  for (const auto& obs : observations_) {
    Vector r = obs.y - obs.model->evaluate(u, obs.design);
    acc += 0.5 * noise_llt_.matrixL().solve(r).squaredNorm();
  }
  return acc;
}

double SequentialTarget::log_unnormalized_density(const Vector& u) const {
  return prior_density_(u) - potential(u);
}

Vector SequentialTarget::log_unnormalized_density_batch(const Matrix& U) const {
  Vector out = prior_density_.batch(U);
  for (const auto& obs : observations_) {
    Matrix g = obs.model->evaluate_ensemble(U, obs.design);
    Matrix r = (-g).rowwise() + obs.y.transpose();
    out -= 0.5 * whiten(r).rowwise().squaredNorm();
  }
  return out;
}

}  // namespace seqboed
