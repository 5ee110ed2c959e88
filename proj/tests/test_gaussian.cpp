#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "seqboed/errors.hpp"
#include "seqboed/gaussian.hpp"
#include "seqboed/util.hpp"

using namespace seqboed;

namespace {

Matrix random_spd(Eigen::Index d, RngStream& rng, double ridge = 0.1) {
  Matrix a = rng.normal_matrix(d, d);
  return a * a.transpose() + ridge * Matrix::Identity(d, d);
}

Gaussian random_gaussian(Eigen::Index d, RngStream& rng) {
  return Gaussian(rng.normal_vector(d), random_spd(d, rng));
}

}  // namespace

TEST_CASE("empirical moments: two-point and degenerate samples") {
  Matrix u(2, 1);
  u << 1.0, 3.0;
  auto m = empirical_moments(u);
  CHECK(m.mean_u(0) == doctest::Approx(2.0));
  CHECK(m.cov_u(0, 0) == doctest::Approx(2.0));  // 1/(J-1) normalization

  Matrix c(3, 1);
  c << 4.2, 4.2, 4.2;
  auto mc = empirical_moments(c);
  CHECK(mc.mean_u(0) == doctest::Approx(4.2));
  CHECK(mc.cov_u(0, 0) == doctest::Approx(0.0));

  Matrix one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(empirical_moments(one), InvalidArgumentError);
}

TEST_CASE("empirical moments: mean-field normalization") {
  Matrix u(2, 1);
  u << 1.0, 3.0;
  auto m = empirical_moments(u, CovNormalization::MeanField);
  CHECK(m.cov_u(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("empirical moments: Monte Carlo against a known 2D Gaussian") {
  // Known joint for (u, y): means (1, -2), cov [[2, 0.6], [0.6, 1.5]].
  Vector mean(2);
  mean << 1.0, -2.0;
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.5;
  Gaussian joint(mean, cov);

  RngStream rng(2024);
  const Eigen::Index J = 100000;
  Matrix s = sample_gaussian(joint, J, rng);
  Matrix su = s.col(0), sy = s.col(1);
  auto m = empirical_moments(su, sy);

  // Batch the same estimator to get standard errors for each block.
  const int B = 10;
  const Eigen::Index len = J / B;
  auto check_within_3se = [&](double full, auto per_batch, double truth) {
    Eigen::VectorXd batch(B);
    for (int b = 0; b < B; ++b) batch[b] = per_batch(b, len);
    const double mu = batch.mean();
    const double se = std::sqrt((batch.array() - mu).square().sum() / (B - 1) / B);
    CHECK(std::abs(full - truth) <= 3.0 * se);
  };

  check_within_3se(m.mean_u(0), [&](int b, Eigen::Index n) {
    return su.middleRows(b * n, n).mean();
  }, 1.0);
  check_within_3se(m.mean_y(0), [&](int b, Eigen::Index n) {
    return sy.middleRows(b * n, n).mean();
  }, -2.0);
  check_within_3se(m.cov_u(0, 0), [&](int b, Eigen::Index n) {
    return empirical_moments(Matrix(su.middleRows(b * n, n))).cov_u(0, 0);
  }, 2.0);
  check_within_3se(m.cov_y(0, 0), [&](int b, Eigen::Index n) {
    return empirical_moments(Matrix(sy.middleRows(b * n, n))).cov_u(0, 0);
  }, 1.5);
  check_within_3se(m.cov_uy(0, 0), [&](int b, Eigen::Index n) {
    return empirical_moments(Matrix(su.middleRows(b * n, n)),
                             Matrix(sy.middleRows(b * n, n))).cov_uy(0, 0);
  }, 0.6);
}

TEST_CASE("gaussian log density: analytic values") {
  Gaussian std1(Vector::Zero(1), Matrix::Identity(1, 1));
  Vector x0 = Vector::Zero(1);
  CHECK(gaussian_log_density(std1, x0) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)));

  Gaussian std2(Vector::Zero(2), Matrix::Identity(2, 2));
  Vector x11 = Vector::Ones(2);
  CHECK(gaussian_log_density(std2, x11) ==
        doctest::Approx(-1.0 - std::log(2.0 * std::numbers::pi)));

  // prior N(2, 2) evaluated at its mean
  Gaussian prior(Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 2.0));
  Vector x2 = Vector::Constant(1, 2.0);
  CHECK(gaussian_log_density(prior, x2) ==
        doctest::Approx(-0.5 * std::log(4.0 * std::numbers::pi)));
}

TEST_CASE("gaussian log density: non-PD covariance is rejected with pivot info") {
  Matrix c(2, 2);
  c << 1.0, 0.0, 0.0, -1.0;
  Gaussian g(Vector::Zero(2), c);
  try {
    gaussian_log_density(g, Vector::Zero(2));
    FAIL("expected NumericalDegeneracyError");
  } catch (const NumericalDegeneracyError& e) {
    CHECK(e.smallest_pivot() < 0.0);
  }
}

TEST_CASE("gaussian log density: batch equals pointwise") {
  RngStream rng(7);
  Gaussian g = random_gaussian(3, rng);
  GaussianLogDensity ld(g);
  Matrix X = rng.normal_matrix(20, 3);
  Vector b = ld.batch(X);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    CHECK(b[i] == doctest::Approx(ld(X.row(i).transpose())).epsilon(1e-12));
}

TEST_CASE("kl divergence: analytic scalar cases") {
  Gaussian n01(Vector::Zero(1), Matrix::Identity(1, 1));
  Gaussian n11(Vector::Ones(1), Matrix::Identity(1, 1));
  Gaussian n02(Vector::Zero(1), Matrix::Constant(1, 1, 2.0));

  CHECK(kl_gaussian(n01, n01) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kl_gaussian(n11, n01) == doctest::Approx(0.5));
  CHECK(kl_gaussian(n02, n01) == doctest::Approx(0.5 * (2.0 - 1.0 - std::log(2.0))));

  Gaussian n2(Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK_THROWS_AS(kl_gaussian(n01, n2), InvalidArgumentError);
}

TEST_CASE("kl divergence: identity and nonnegativity over random PD pairs") {
  RngStream rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    Gaussian p = random_gaussian(d, rng);
    Gaussian q = random_gaussian(d, rng);
    CHECK(std::abs(kl_gaussian(p, p)) <= 1e-12);
    CHECK(kl_gaussian(p, q) >= -1e-12);
  }
}

TEST_CASE("conditioning: independence leaves the u block unchanged") {
  EmpiricalMoments m;
  m.mean_u = Vector::Constant(2, 1.0);
  m.mean_y = Vector::Constant(1, -1.0);
  m.cov_u = 2.0 * Matrix::Identity(2, 2);
  m.cov_y = Matrix::Constant(1, 1, 3.0);
  m.cov_uy = Matrix::Zero(2, 1);
  m.sample_count = 10;

  Gaussian post = condition_gaussian(m, Vector::Constant(1, 5.0));
  CHECK((post.mean() - m.mean_u).norm() == doctest::Approx(0.0));
  CHECK((post.cov() - m.cov_u).norm() == doctest::Approx(0.0));
}

TEST_CASE("conditioning: scalar Schur complement") {
  EmpiricalMoments m;
  m.mean_u = Vector::Zero(1);
  m.mean_y = Vector::Zero(1);
  m.cov_u = Matrix::Identity(1, 1);
  m.cov_y = Matrix::Identity(1, 1);
  m.cov_uy = Matrix::Constant(1, 1, 0.5);
  m.sample_count = 10;

  Gaussian post = condition_gaussian(m, Vector::Ones(1));
  CHECK(post.mean()(0) == doctest::Approx(0.5));
  CHECK(post.cov()(0, 0) == doctest::Approx(0.75));
}

TEST_CASE("conditioning: empirical linear-Gaussian posterior matches analytic oracle") {
  // y = A u + eta with A = 3, prior N(2, 2), noise N(0, 1).
  const double A = 3.0, sigma0 = 2.0, gamma = 1.0, m0 = 2.0;
  RngStream rng(31);
  const Eigen::Index J = 100000;
  Matrix u(J, 1), y(J, 1);
  for (Eigen::Index j = 0; j < J; ++j) {
    u(j, 0) = m0 + std::sqrt(sigma0) * rng.normal();
    y(j, 0) = A * u(j, 0) + std::sqrt(gamma) * rng.normal();
  }
  auto m = empirical_moments(u, y);
  const double y_obs = 7.0;
  Gaussian post = condition_gaussian(m, Vector::Constant(1, y_obs));

  const double post_var = 1.0 / (1.0 / sigma0 + A * A / gamma);  // = 1/9.5
  const double post_mean = post_var * (m0 / sigma0 + A * y_obs / gamma);
  CHECK(post.cov()(0, 0) == doctest::Approx(post_var).epsilon(0.02));
  CHECK(post.mean()(0) == doctest::Approx(post_mean).epsilon(0.02));
}

TEST_CASE("conditioning: mean affine in y, covariance independent of y") {
  RngStream rng(55);
  Matrix u = rng.normal_matrix(200, 2);
  Matrix y = u * rng.normal_matrix(2, 3) + 0.5 * rng.normal_matrix(200, 3);
  auto m = empirical_moments(u, y);

  Vector y0 = rng.normal_vector(3), y1 = rng.normal_vector(3);
  Gaussian g0 = condition_gaussian(m, y0);
  Gaussian g1 = condition_gaussian(m, y1);
  Gaussian gm = condition_gaussian(m, Vector(0.5 * (y0 + y1)));

  CHECK((g0.cov() - g1.cov()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((0.5 * (g0.mean() + g1.mean()) - gm.mean()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("joint block matrix of empirical moments is symmetric PSD") {
  RngStream rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix u = rng.normal_matrix(40, 2);
    Matrix y = u * rng.normal_matrix(2, 2) + rng.normal_matrix(40, 2);
    Gaussian joint = empirical_moments(u, y).joint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(joint.cov());
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("sampling: degenerate covariance, determinism, CLT") {
  Gaussian degenerate(Vector::Constant(2, 3.0), Matrix::Zero(2, 2));
  RngStream rng(5);
  Matrix s = sample_gaussian(degenerate, 8, rng);
  CHECK((s.rowwise() - degenerate.mean().transpose()).cwiseAbs().maxCoeff() == 0.0);

  Gaussian g(Vector::Constant(1, 2.0), Matrix::Constant(1, 1, 2.0));
  RngStream r1(77), r2(77);
  Matrix a = sample_gaussian(g, 500, r1);
  Matrix b = sample_gaussian(g, 500, r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  RngStream r3(88);
  Matrix big = sample_gaussian(g, 100000, r3);
  CHECK(std::abs(big.col(0).mean() - 2.0) <= 3.0 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("kl of empirical fit decays with sample size (quick rate check)") {
  Vector mean(2);
  mean << 0.5, -0.25;
  Matrix cov(2, 2);
  cov << 1.5, 0.4, 0.4, 0.8;
  Gaussian truth(mean, cov);

  std::vector<double> js = {100, 1000, 10000};
  std::vector<double> mean_kl;
  RngStream rng(404);
  for (double dj : js) {
    const auto J = static_cast<Eigen::Index>(dj);
    double acc = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      RngStream r = rng.substream(static_cast<std::uint64_t>(dj) * 100 + rep);
      Matrix s = sample_gaussian(truth, J, r);
      auto m = empirical_moments(s);
      acc += kl_gaussian(truth, m.u_marginal());
    }
    mean_kl.push_back(acc / 10.0);
  }
  const double slope = fit_loglog_slope(js, mean_kl);
  CHECK(slope <= -0.6);
  CHECK(slope >= -1.3);
}
