#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "seqboed/rng.hpp"

namespace seqboed {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Normalization of empirical covariances. Unbiased (1/(J-1)) is the default;
/// the interacting-particle dynamics use MeanField (1/J) and say so explicitly.
enum class CovNormalization { Unbiased, MeanField };

/// Mean vector plus symmetric covariance. The covariance is symmetrized on
/// construction (asymmetry beyond 1e-10 relative is rejected); positive
/// semi-definiteness is enforced where it is actually needed, i.e. at
/// factorization time in density evaluation, conditioning and sampling.
class Gaussian {
 public:
  Gaussian(Vector mean, Matrix covariance);

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Per-block means and (cross-)covariances of paired (u, y) samples.
/// Only cov_uy is stored; cov_yu is its transpose.
struct EmpiricalMoments {
  Vector mean_u;
  Vector mean_y;
  Matrix cov_u;
  Matrix cov_y;
  Matrix cov_uy;  // d x k
  Eigen::Index sample_count = 0;

  Eigen::Index param_dim() const { return mean_u.size(); }
  Eigen::Index obs_dim() const { return mean_y.size(); }

  Gaussian u_marginal() const { return Gaussian(mean_u, cov_u); }
  Gaussian y_marginal() const { return Gaussian(mean_y, cov_y); }
  /// Assembles the full (d+k) block Gaussian [[cov_u, cov_uy],[cov_uy^T, cov_y]].
  Gaussian joint() const;
};

/// Moments of paired samples; rows are samples. Requires J >= 2 and equal row
/// counts. samples_y may have zero columns (u-only moments).
EmpiricalMoments empirical_moments(const Matrix& samples_u, const Matrix& samples_y,
                                   CovNormalization norm = CovNormalization::Unbiased);
EmpiricalMoments empirical_moments(const Matrix& samples_u,
                                   CovNormalization norm = CovNormalization::Unbiased);

/// log N(x; mean, cov) through a Cholesky factorization. Throws
/// NumericalDegeneracyError when cov is not strictly positive definite.
double gaussian_log_density(const Gaussian& g, const Vector& x);

/// Same density evaluated at many points; factorizes once.
class GaussianLogDensity {
 public:
  explicit GaussianLogDensity(const Gaussian& g);
  double operator()(const Vector& x) const;
  /// Rows of X are evaluation points.
  Vector batch(const Matrix& X) const;

 private:
  Vector mean_;
  Eigen::LLT<Matrix> llt_;
  double log_norm_;  // -1/2 log det(2 pi C)
};

/// KL(p || q) = 1/2 ( tr(Cq^-1 Cp) - d + |mq-mp|^2_{Cq} - log det(Cq^-1 Cp) ).
/// Both covariances must be strictly PD and dimensions must match.
double kl_gaussian(const Gaussian& p, const Gaussian& q);

/// Gaussian conditioning of the joint fit on y = y_value:
///   mean = mean_u + cov_uy cov_y^-1 (y_value - mean_y)
///   cov  = cov_u  - cov_uy cov_y^-1 cov_uy^T
/// cov_y gets jitter 1e-10 tr(cov_y)/k I when its factorization fails; the
/// result covariance is symmetrized and eigenvalues in [-1e-10 |C|, 0) are
/// clipped to zero. Anything worse raises NumericalDegeneracyError.
Gaussian condition_gaussian(const EmpiricalMoments& m, const Vector& y_value);

/// count i.i.d. samples (rows) via Cholesky with an eigendecomposition
/// fallback for semidefinite covariances. Deterministic given the stream.
Matrix sample_gaussian(const Gaussian& g, Eigen::Index count, RngStream& rng);

}  // namespace seqboed
