#include "seqboed/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqboed/errors.hpp"

namespace seqboed {

namespace {
constexpr double kGaussOffset = 0.28867513459481288;  // 1/(2 sqrt(3))
}

Vector Tridiag::apply(const Vector& v) const {
  const Eigen::Index n = diag.size();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = diag[i] * v[i];
    if (i > 0) acc += lower[i - 1] * v[i - 1];
    if (i + 1 < n) acc += upper[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

TridiagFactor::TridiagFactor(const Tridiag& t) {
  const Eigen::Index n = t.diag.size();
  c_prime_ = Vector(n - 1);
  d_diag_ = Vector(n);
  lower_ = t.lower;
  d_diag_[0] = t.diag[0];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    c_prime_[i] = t.upper[i];
    const double m = t.lower[i] / d_diag_[i];
    d_diag_[i + 1] = t.diag[i + 1] - m * t.upper[i];
  }
  if (d_diag_.cwiseAbs().minCoeff() <= 0.0)
    throw NumericalDegeneracyError("TridiagFactor: singular system", d_diag_.minCoeff());
}

Vector TridiagFactor::solve(const Vector& rhs) const {
  const Eigen::Index n = d_diag_.size();
  Vector y(n);
  y[0] = rhs[0];
  for (Eigen::Index i = 1; i < n; ++i)
    y[i] = rhs[i] - lower_[i - 1] / d_diag_[i - 1] * y[i - 1];
  Vector x(n);
  x[n - 1] = y[n - 1] / d_diag_[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i)
    x[i] = (y[i] - c_prime_[i] * x[i + 1]) / d_diag_[i];
  return x;
}

HeatFem::HeatFem(int n_interior) : n_(n_interior), h_(1.0 / (n_interior + 1)) {
  if (n_interior < 2) throw InvalidArgumentError("HeatFem: need at least 2 interior nodes");
}

Tridiag HeatFem::mass() const {
  Tridiag m{Vector::Constant(n_ - 1, h_ / 6.0), Vector::Constant(n_, 2.0 * h_ / 3.0),
            Vector::Constant(n_ - 1, h_ / 6.0)};
  return m;
}

Tridiag HeatFem::stiffness(const std::function<double(double)>& kappa) const {
  Tridiag k{Vector::Zero(n_ - 1), Vector::Zero(n_), Vector::Zero(n_ - 1)};
  for (int e = 0; e <= n_; ++e) {
    const double xm = (e + 0.5) * h_;
    const double kbar = 0.5 * (kappa(xm - kGaussOffset * h_) + kappa(xm + kGaussOffset * h_));
    const double w = kbar / h_;  // (integral of kappa over element) / h^2
    const int left = e - 1, right = e;  // interior indices of element nodes
    if (left >= 0) k.diag[left] += w;
    if (right < n_) k.diag[right] += w;
    if (left >= 0 && right < n_) {
      k.lower[left] -= w;
      k.upper[left] -= w;
    }
  }
  return k;
}

Vector HeatFem::load(const std::function<double(double)>& f) const {
  Vector F = Vector::Zero(n_);
  for (int e = 0; e <= n_; ++e) {
    const double xm = (e + 0.5) * h_;
    const double g1 = xm - kGaussOffset * h_, g2 = xm + kGaussOffset * h_;
    const double f1 = f(g1), f2 = f(g2);
    // hat-function values at the two Gauss points
    const double phi_l1 = 0.5 + kGaussOffset, phi_l2 = 0.5 - kGaussOffset;
    const int left = e - 1, right = e;
    if (left >= 0) F[left] += 0.5 * h_ * (f1 * phi_l1 + f2 * phi_l2);
    if (right < n_) F[right] += 0.5 * h_ * (f1 * phi_l2 + f2 * phi_l1);
  }
  return F;
}

Matrix HeatFem::integrate(const std::function<double(double)>& kappa,
                          const std::function<double(double, double)>& source, double dt,
                          int n_steps) const {
  if (dt <= 0.0 || n_steps < 1) throw InvalidArgumentError("HeatFem::integrate: bad dt/n_steps");
  const Tridiag M = mass();
  const Tridiag K = stiffness(kappa);
  Tridiag lhs{M.lower + 0.5 * dt * K.lower, M.diag + 0.5 * dt * K.diag,
              M.upper + 0.5 * dt * K.upper};
  Tridiag rhs_op{M.lower - 0.5 * dt * K.lower, M.diag - 0.5 * dt * K.diag,
                 M.upper - 0.5 * dt * K.upper};
  TridiagFactor factor(lhs);

  Matrix traj(n_steps, n_);
  Vector y = Vector::Zero(n_);
  for (int i = 0; i < n_steps; ++i) {
    const double t_mid = (i + 0.5) * dt;
    Vector F = load([&](double x) { return source(t_mid, x); });
    y = factor.solve(rhs_op.apply(y) + dt * F);
    traj.row(i) = y.transpose();
  }
  return traj;
}

Matrix HeatFem::integrate_autonomous(const Tridiag& K, const Vector& F, double dt,
                                     int n_steps) const {
  const Tridiag M = mass();
  Tridiag lhs{M.lower + 0.5 * dt * K.lower, M.diag + 0.5 * dt * K.diag,
              M.upper + 0.5 * dt * K.upper};
  Tridiag rhs_op{M.lower - 0.5 * dt * K.lower, M.diag - 0.5 * dt * K.diag,
                 M.upper - 0.5 * dt * K.upper};
  TridiagFactor factor(lhs);

  Matrix traj(n_steps, n_);
  Vector y = Vector::Zero(n_);
  Vector dtF = dt * F;
  for (int i = 0; i < n_steps; ++i) {
    y = factor.solve(rhs_op.apply(y) + dtF);
    traj.row(i) = y.transpose();
  }
  return traj;
}

double HeatFem::evaluate(const Eigen::Ref<const Vector>& coeffs, double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double s = x / h_;
  int e = std::min(static_cast<int>(s), n_);  // element index, nodes e..e+1
  const double local = s - e;
  const double left = (e >= 1) ? coeffs[e - 1] : 0.0;
  const double right = (e < n_) ? coeffs[e] : 0.0;
  return left * (1.0 - local) + right * local;
}

double HeatFem::l2_norm(const Eigen::Ref<const Vector>& coeffs) const {
  return std::sqrt(coeffs.dot(mass().apply(coeffs)));
}

double HeatFem::l2_error(const Eigen::Ref<const Vector>& coeffs,
                         const std::function<double(double)>& exact) const {
  double acc = 0.0;
  for (int e = 0; e <= n_; ++e) {
    const double xm = (e + 0.5) * h_;
    for (double g : {xm - kGaussOffset * h_, xm + kGaussOffset * h_}) {
      const double diff = evaluate(coeffs, g) - exact(g);
      acc += 0.5 * h_ * diff * diff;
    }
  }
  return std::sqrt(acc);
}

void HeatModelConfig::validate() const {
  if (n_x < 2) throw InvalidArgumentError("heat config: n_x must be >= 2");
  if (dt <= 0.0) throw InvalidArgumentError("heat config: dt must be positive");
  if (n_steps < 1) throw InvalidArgumentError("heat config: n_steps must be >= 1");
  if (d < 1) throw InvalidArgumentError("heat config: d must be >= 1");
  if (n_obs_level < 1) throw InvalidArgumentError("heat config: n_obs_level must be >= 1");
  if (obs_dim() >= n_x) throw InvalidArgumentError("heat config: k must stay below n_x");
  if (sigma <= 0.0) throw InvalidArgumentError("heat config: sigma must be positive");
  for (int s : obs_steps)
    if (s < 1 || s > n_steps)
      throw InvalidArgumentError("heat config: obs_steps must lie in 1..n_steps");
}

HeatEquationSolver::HeatEquationSolver(HeatModelConfig cfg)
    : cfg_(std::move(cfg)), fem_(cfg_.n_x) {
  cfg_.validate();

  const int n_el = cfg_.n_x + 1;
  quad_points_ = Vector(2 * n_el);
  const double h = fem_.mesh_width();
  for (int e = 0; e < n_el; ++e) {
    const double xm = (e + 0.5) * h;
    quad_points_[2 * e] = xm - kGaussOffset * h;
    quad_points_[2 * e + 1] = xm + kGaussOffset * h;
  }
  basis_at_quad_ = Matrix(quad_points_.size(), cfg_.d);
  for (Eigen::Index q = 0; q < quad_points_.size(); ++q)
    for (int l = 1; l <= cfg_.d; ++l)
      basis_at_quad_(q, l - 1) =
          cfg_.diffusion_c / (l * l) * std::cos(l * std::numbers::pi * quad_points_[q]);

  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * cfg_.sigma);
  load_unit_ = fem_.load([&](double x) {
    return cfg_.source_scale * norm * std::exp(-0.5 * (x - 0.5) * (x - 0.5) / cfg_.sigma);
  });

  noise_scale_ = 0.1 * observe_stacked(Vector::Constant(cfg_.d, 0.5), 1.0).norm();
}

double HeatEquationSolver::kappa_at(double x, const Vector& u) const {
  double acc = 0.0;
  for (int l = 1; l <= cfg_.d; ++l)
    acc += cfg_.diffusion_c / (l * l) * std::cos(l * std::numbers::pi * x) * u[l - 1];
  return std::exp(acc);
}

Matrix HeatEquationSolver::solve(const Vector& u, double p) const {
  if (u.size() != cfg_.d) throw InvalidArgumentError("heat solve: parameter dimension mismatch");
  if (!u.allFinite() || !std::isfinite(p))
    throw ForwardModelError("heat solve: non-finite input");

  Vector log_kappa = basis_at_quad_ * u;
  if (!log_kappa.allFinite()) throw ForwardModelError("heat solve: diffusivity overflow");

  const int n = cfg_.n_x;
  Tridiag K{Vector::Zero(n - 1), Vector::Zero(n), Vector::Zero(n - 1)};
  const double h = fem_.mesh_width();
  for (int e = 0; e <= n; ++e) {
    const double kbar =
        0.5 * (std::exp(log_kappa[2 * e]) + std::exp(log_kappa[2 * e + 1]));
    const double w = kbar / h;
    const int left = e - 1, right = e;
    if (left >= 0) K.diag[left] += w;
    if (right < n) K.diag[right] += w;
    if (left >= 0 && right < n) {
      K.lower[left] -= w;
      K.upper[left] -= w;
    }
  }

  const double amp = std::exp(-cfg_.alpha * (p - 1.0) * (p - 1.0));
  Matrix traj = fem_.integrate_autonomous(K, amp * load_unit_, cfg_.dt, cfg_.n_steps);
  if (!traj.allFinite()) throw ForwardModelError("heat solve: non-finite trajectory");
  return traj;
}

std::shared_ptr<const Matrix> HeatEquationSolver::solve_cached(const Vector& u, double p) const {
  struct CacheEntry {
    const void* solver = nullptr;
    Vector u;
    double p = 0.0;
    std::shared_ptr<const Matrix> traj;
  };
  thread_local CacheEntry cache;
  if (cache.solver == this && cache.p == p && cache.u.size() == u.size() && cache.u == u)
    return cache.traj;
  cache.solver = this;
  cache.u = u;
  cache.p = p;
  cache.traj = std::make_shared<const Matrix>(solve(u, p));
  return cache.traj;
}

Vector HeatEquationSolver::observe(const Matrix& trajectory, int step) const {
  if (step < 1 || step > trajectory.rows())
    throw InvalidArgumentError("heat observe: step outside trajectory range");
  const int k = cfg_.obs_dim();
  const double denom = static_cast<double>(1 << cfg_.n_obs_level);
  Vector obs(k);
  Vector row = trajectory.row(step - 1).transpose();
  for (int j = 1; j <= k; ++j) obs[j - 1] = fem_.evaluate(row, j / denom);
  return obs;
}

Vector HeatEquationSolver::observe_stacked(const Vector& u, double p) const {
  auto traj = solve_cached(u, p);
  const int k = cfg_.obs_dim();
  Vector out(k * static_cast<Eigen::Index>(cfg_.obs_steps.size()));
  for (std::size_t i = 0; i < cfg_.obs_steps.size(); ++i)
    out.segment(i * k, k) = observe(*traj, cfg_.obs_steps[i]);
  return out;
}

HeatStepModel::HeatStepModel(std::shared_ptr<const HeatEquationSolver> solver, int obs_step)
    : solver_(std::move(solver)), obs_step_(obs_step) {
  const auto& steps = solver_->config().obs_steps;
  if (std::find(steps.begin(), steps.end(), obs_step_) == steps.end())
    throw InvalidArgumentError("HeatStepModel: obs_step is not a configured observation step");
}

Eigen::Index HeatStepModel::param_dim() const { return solver_->config().d; }
Eigen::Index HeatStepModel::obs_dim() const { return solver_->config().obs_dim(); }

Vector HeatStepModel::evaluate(const Vector& u, const Vector& p) const {
  auto traj = solver_->solve_cached(u, p(0));
  Vector g = solver_->observe(*traj, obs_step_);
  if (!g.allFinite()) throw ForwardModelError("HeatStepModel: non-finite observation");
  return g;
}

}  // namespace seqboed
