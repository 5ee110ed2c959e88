#include "seqboed/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "seqboed/errors.hpp"

namespace seqboed {

namespace {

constexpr double kSymTol = 1e-10;

double smallest_ldlt_pivot(const Matrix& m) {
  Eigen::LDLT<Matrix> ldlt(m);
  return ldlt.vectorD().minCoeff();
}

double divisor(Eigen::Index J, CovNormalization norm) {
  return norm == CovNormalization::Unbiased ? static_cast<double>(J - 1)
                                            : static_cast<double>(J);
}

}  // namespace

Gaussian::Gaussian(Vector mean, Matrix covariance) : mean_(std::move(mean)) {
  if (covariance.rows() != covariance.cols() || covariance.rows() != mean_.size())
    throw InvalidArgumentError("Gaussian: covariance must be square and match the mean dimension");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    throw InvalidArgumentError("Gaussian: covariance is not symmetric within tolerance");
  cov_ = 0.5 * (covariance + covariance.transpose());
}

Gaussian EmpiricalMoments::joint() const {
  const Eigen::Index d = param_dim(), k = obs_dim();
  Vector m(d + k);
  m << mean_u, mean_y;
  Matrix c(d + k, d + k);
  c.topLeftCorner(d, d) = cov_u;
  c.topRightCorner(d, k) = cov_uy;
  c.bottomLeftCorner(k, d) = cov_uy.transpose();
  c.bottomRightCorner(k, k) = cov_y;
  return Gaussian(std::move(m), std::move(c));
}

EmpiricalMoments empirical_moments(const Matrix& samples_u, const Matrix& samples_y,
                                   CovNormalization norm) {
  const Eigen::Index J = samples_u.rows();
  if (J < 2) throw InvalidArgumentError("empirical_moments: need at least 2 samples");
  if (samples_y.size() > 0 && samples_y.rows() != J)
    throw InvalidArgumentError("empirical_moments: row counts of u and y samples differ");

  const double div = divisor(J, norm);
  EmpiricalMoments m;
  m.sample_count = J;
  m.mean_u = samples_u.colwise().mean();
  Matrix du = samples_u.rowwise() - m.mean_u.transpose();
  m.cov_u = du.transpose() * du / div;

  const Eigen::Index k = samples_y.cols();
  if (k > 0) {
    m.mean_y = samples_y.colwise().mean();
    Matrix dy = samples_y.rowwise() - m.mean_y.transpose();
    m.cov_y = dy.transpose() * dy / div;
    m.cov_uy = du.transpose() * dy / div;
  } else {
    m.mean_y = Vector(0);
    m.cov_y = Matrix(0, 0);
    m.cov_uy = Matrix(samples_u.cols(), 0);
  }
  return m;
}

EmpiricalMoments empirical_moments(const Matrix& samples_u, CovNormalization norm) {
  return empirical_moments(samples_u, Matrix(samples_u.rows(), 0), norm);
}

GaussianLogDensity::GaussianLogDensity(const Gaussian& g) : mean_(g.mean()) {
  llt_.compute(g.cov());
  if (llt_.info() != Eigen::Success)
    throw NumericalDegeneracyError("gaussian_log_density: covariance not positive definite",
                                   smallest_ldlt_pivot(g.cov()));
  const auto& L = llt_.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
  log_norm_ = -0.5 * (log_det + static_cast<double>(mean_.size()) * std::log(2.0 * std::numbers::pi));
}

double GaussianLogDensity::operator()(const Vector& x) const {
  if (x.size() != mean_.size())
    throw InvalidArgumentError("gaussian_log_density: dimension mismatch");
  Vector w = llt_.matrixL().solve(x - mean_);
  return -0.5 * w.squaredNorm() + log_norm_;
}

Vector GaussianLogDensity::batch(const Matrix& X) const {
  if (X.cols() != mean_.size())
    throw InvalidArgumentError("gaussian_log_density: dimension mismatch");
  Matrix w = llt_.matrixL().solve((X.rowwise() - mean_.transpose()).transpose());
  return (-0.5 * w.colwise().squaredNorm().array() + log_norm_).matrix().transpose();
}

double gaussian_log_density(const Gaussian& g, const Vector& x) {
  return GaussianLogDensity(g)(x);
}

double kl_gaussian(const Gaussian& p, const Gaussian& q) {
  const Eigen::Index d = p.dim();
  if (q.dim() != d) throw InvalidArgumentError("kl_gaussian: dimension mismatch");

  Eigen::LLT<Matrix> llt_q(q.cov());
  if (llt_q.info() != Eigen::Success)
    throw NumericalDegeneracyError("kl_gaussian: q covariance not positive definite",
                                   smallest_ldlt_pivot(q.cov()));
  Eigen::LLT<Matrix> llt_p(p.cov());
  if (llt_p.info() != Eigen::Success)
    throw NumericalDegeneracyError("kl_gaussian: p covariance not positive definite",
                                   smallest_ldlt_pivot(p.cov()));

  Matrix Lp = llt_p.matrixL();
  Matrix W = llt_q.matrixL().solve(Lp);
  const double trace_term = W.squaredNorm();
  const double quad = llt_q.matrixL().solve(q.mean() - p.mean()).squaredNorm();
  double log_det_p = 0.0, log_det_q = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    log_det_p += 2.0 * std::log(Lp(i, i));
    log_det_q += 2.0 * std::log(llt_q.matrixLLT()(i, i));
  }
  return 0.5 * (trace_term - static_cast<double>(d) + quad + log_det_q - log_det_p);
}

Gaussian condition_gaussian(const EmpiricalMoments& m, const Vector& y_value) {
  const Eigen::Index k = m.obs_dim();
  if (y_value.size() != k)
    throw InvalidArgumentError("condition_gaussian: y_value dimension mismatch");
  if (k == 0) return Gaussian(m.mean_u, m.cov_u);

  Matrix cy = m.cov_y;
  Eigen::LLT<Matrix> llt(cy);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * cy.trace() / static_cast<double>(k);
    cy += jitter * Matrix::Identity(k, k);
    llt.compute(cy);
    if (llt.info() != Eigen::Success)
      throw NumericalDegeneracyError("condition_gaussian: cov_y singular after jitter",
                                     smallest_ldlt_pivot(cy));
  }

  Vector mean = m.mean_u + m.cov_uy * llt.solve(y_value - m.mean_y);
  Matrix cov = m.cov_u - m.cov_uy * llt.solve(m.cov_uy.transpose());
  cov = 0.5 * (cov + cov.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  const double norm = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-10 * norm)
    throw NumericalDegeneracyError("condition_gaussian: conditional covariance indefinite",
                                   min_eig);
  if (min_eig < 0.0) {
    Vector clipped = es.eigenvalues().cwiseMax(0.0);
    cov = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    cov = 0.5 * (cov + cov.transpose());
  }
  return Gaussian(std::move(mean), std::move(cov));
}

Matrix sample_gaussian(const Gaussian& g, Eigen::Index count, RngStream& rng) {
  if (count < 1) throw InvalidArgumentError("sample_gaussian: count must be >= 1");
  const Eigen::Index d = g.dim();

  Matrix factor;  // d x d with factor factor^T = cov
  Eigen::LLT<Matrix> llt(g.cov());
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.cov());
    const double norm = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10 * norm)
      throw NumericalDegeneracyError("sample_gaussian: covariance indefinite", min_eig);
    factor = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  Matrix samples(count, d);
  for (Eigen::Index i = 0; i < count; ++i)
    samples.row(i) = (g.mean() + factor * rng.normal_vector(d)).transpose();
  return samples;
}

}  // namespace seqboed
