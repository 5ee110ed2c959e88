#pragma once

#include <memory>

#include "seqboed/gaussian.hpp"

namespace seqboed {

/// Deterministic parameterized forward map G(u, p). Observation noise is
/// added by callers. Implementations must be immutable after construction;
/// evaluate is pure and reentrant.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual Eigen::Index param_dim() const = 0;
  virtual Eigen::Index design_dim() const = 0;
  virtual Eigen::Index obs_dim() const = 0;

  /// Throws ForwardModelError on non-finite output.
  virtual Vector evaluate(const Vector& u, const Vector& p) const = 0;

  /// Evaluates all rows of U at the same design. Default loops evaluate().
  virtual Matrix evaluate_ensemble(const Matrix& U, const Vector& p) const;
};

struct LinearModelConfig {
  double c = 2.0;       // curvature of the design response
  double d_shift = 3.0; // vertical shift, A(p) = -c (p-1)^2 + d_shift
};

inline double linear_amplitude(const LinearModelConfig& cfg, double p) {
  return -cfg.c * (p - 1.0) * (p - 1.0) + cfg.d_shift;
}

inline double linear_eval(const LinearModelConfig& cfg, double u, double p) {
  return linear_amplitude(cfg, p) * u;
}

/// Scalar linear model G(u, p) = A(p) u.
class LinearModel : public ForwardModel {
 public:
  explicit LinearModel(LinearModelConfig cfg);

  Eigen::Index param_dim() const override { return 1; }
  Eigen::Index design_dim() const override { return 1; }
  Eigen::Index obs_dim() const override { return 1; }
  Vector evaluate(const Vector& u, const Vector& p) const override;
  Matrix evaluate_ensemble(const Matrix& U, const Vector& p) const override;

  double amplitude(double p) const { return linear_amplitude(cfg_, p); }
  const LinearModelConfig& config() const { return cfg_; }

 private:
  LinearModelConfig cfg_;
};

struct NearLinearModelConfig {
  double c = 2.0;
  double d_shift = 3.0;
  double tau = 1.0;  // strength of the quadratic perturbation
};

inline double near_linear_eval(const NearLinearModelConfig& cfg, double u, double p) {
  return (-cfg.c * (p - 1.0) * (p - 1.0) + cfg.d_shift) * u + cfg.tau * u * u;
}

/// Scalar near-linear model G(u, p) = A(p) u + tau u^2.
class NearLinearModel : public ForwardModel {
 public:
  explicit NearLinearModel(NearLinearModelConfig cfg);

  Eigen::Index param_dim() const override { return 1; }
  Eigen::Index design_dim() const override { return 1; }
  Eigen::Index obs_dim() const override { return 1; }
  Vector evaluate(const Vector& u, const Vector& p) const override;
  Matrix evaluate_ensemble(const Matrix& U, const Vector& p) const override;

  double amplitude(double p) const { return -cfg_.c * (p - 1.0) * (p - 1.0) + cfg_.d_shift; }
  const NearLinearModelConfig& config() const { return cfg_; }

 private:
  NearLinearModelConfig cfg_;
};

/// Design-independent map G(u) = A u + b. Used for multivariate linear
/// targets (filter recursions, equivariance checks, zero-information models).
class AffineForwardModel : public ForwardModel {
 public:
  AffineForwardModel(Matrix A, Vector b);

  Eigen::Index param_dim() const override { return A_.cols(); }
  Eigen::Index design_dim() const override { return 1; }
  Eigen::Index obs_dim() const override { return A_.rows(); }
  Vector evaluate(const Vector& u, const Vector& p) const override;
  Matrix evaluate_ensemble(const Matrix& U, const Vector& p) const override;

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
};

}  // namespace seqboed
