#pragma once

#include <memory>
#include <vector>

#include "seqboed/forward_model.hpp"
#include "seqboed/gaussian.hpp"

namespace seqboed {

/// One collected data point: observation, the design it was taken under, and
/// the forward operator of that step.
struct Observation {
  Vector y;
  Vector design;
  std::shared_ptr<const ForwardModel> model;
};

/// Posterior after conditioning a Gaussian prior on a (possibly empty) list
/// of observations with shared Gaussian noise N(0, Gamma). The density is
///   pi(u) ~ exp(-sum_l Phi(u, y_l, p_l)) pi_0(u),
/// Phi(u, y, p) = 1/2 |y - G(u, p)|^2_Gamma.
class SequentialTarget {
 public:
  SequentialTarget(Gaussian prior, Gaussian noise);

  void add_observation(Observation obs);

  const Gaussian& prior() const { return prior_; }
  const Gaussian& noise() const { return noise_; }
  const std::vector<Observation>& observations() const { return observations_; }
  Eigen::Index param_dim() const { return prior_.dim(); }

  /// Whitens residuals r -> L^-1 r with Gamma = L L^T.
  Matrix whiten(const Matrix& residuals_rows) const;
  const Matrix& noise_precision() const { return gamma_inv_; }
  const Matrix& prior_precision() const { return sigma0_inv_; }

  double potential(const Vector& u) const;
  /// log of the unnormalized density: -potential(u) + log N(u; m0, Sigma0).
  double log_unnormalized_density(const Vector& u) const;
  /// Rows of U are evaluation points; forward maps evaluated per observation.
  Vector log_unnormalized_density_batch(const Matrix& U) const;

 private:
  Gaussian prior_;
  Gaussian noise_;
  std::vector<Observation> observations_;
  Eigen::LLT<Matrix> noise_llt_;
  Matrix gamma_inv_;
  Matrix sigma0_inv_;
  GaussianLogDensity prior_density_;
};

}  // namespace seqboed
