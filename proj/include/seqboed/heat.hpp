#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "seqboed/forward_model.hpp"

namespace seqboed {

/// Tridiagonal matrix stored by bands (interior unknowns only).
struct Tridiag {
  Vector lower;  // n-1
  Vector diag;   // n
  Vector upper;  // n-1

  Vector apply(const Vector& v) const;
};

/// Thomas factorization. The systems assembled here (mass plus scaled
/// stiffness with positive coefficient) are diagonally dominant, so no
/// pivoting is needed.
class TridiagFactor {
 public:
  explicit TridiagFactor(const Tridiag& t);
  Vector solve(const Vector& rhs) const;

 private:
  Vector c_prime_;  // eliminated superdiagonal
  Vector d_diag_;   // pivots
  Vector lower_;
};

/// P1 finite elements on a uniform grid over (0,1) with homogeneous Dirichlet
/// boundaries, zero initial condition, implicit midpoint time stepping:
///   (M + dt/2 K) y_{i+1} = (M - dt/2 K) y_i + dt F(t_mid).
/// Mass matrix assembled exactly; stiffness and load use 2-point Gauss
/// quadrature per element with the coefficient evaluated at quadrature points.
class HeatFem {
 public:
  explicit HeatFem(int n_interior);

  int n_interior() const { return n_; }
  double mesh_width() const { return h_; }
  double node(int i) const { return (i + 1) * h_; }  // i in [0, n)

  Tridiag mass() const;
  Tridiag stiffness(const std::function<double(double)>& kappa) const;
  Vector load(const std::function<double(double)>& f) const;

  /// source(t, x); trajectory rows are interior values at steps 1..n_steps.
  Matrix integrate(const std::function<double(double)>& kappa,
                   const std::function<double(double, double)>& source, double dt,
                   int n_steps) const;

  /// Precomputed-operator variant for a time-independent source.
  Matrix integrate_autonomous(const Tridiag& stiffness_matrix, const Vector& load_vector,
                              double dt, int n_steps) const;

  /// P1 interpolant (zero at the boundary nodes).
  double evaluate(const Eigen::Ref<const Vector>& coeffs, double x) const;

  /// L2 norm of the P1 function, sqrt(c^T M c).
  double l2_norm(const Eigen::Ref<const Vector>& coeffs) const;

  /// L2 error against a reference function, 2-point Gauss per element.
  double l2_error(const Eigen::Ref<const Vector>& coeffs,
                  const std::function<double(double)>& exact) const;

 private:
  int n_;
  double h_;
};

struct HeatModelConfig {
  int n_x = 33;                           // interior nodes
  double dt = 0.005;
  int n_steps = 15;
  std::vector<int> obs_steps = {5, 10, 15};
  int d = 8;                              // diffusivity expansion dimension
  int n_obs_level = 2;                    // k = 2^level - 1 dyadic points
  double diffusion_c = 0.5;
  double alpha = 10.0;                    // source sharpness in the design
  double sigma = 0.1;                     // variance of the source bump
  double source_scale = 1.0;

  int obs_dim() const { return (1 << n_obs_level) - 1; }
  void validate() const;
};

/// Heat-equation forward machinery shared by the per-step observation
/// operators: kappa(x, u) = exp(sum_l c l^-2 cos(l pi x) u_l),
/// f(t, x, p) = exp(-alpha (p-1)^2) rho_sigma(x) with rho_sigma the N(0.5,
/// sigma) density. The trajectory for the most recent (u, p) is memoized per
/// thread so observing several time steps does not re-solve.
class HeatEquationSolver {
 public:
  explicit HeatEquationSolver(HeatModelConfig cfg);

  const HeatModelConfig& config() const { return cfg_; }
  const HeatFem& fem() const { return fem_; }

  Matrix solve(const Vector& u, double p) const;
  std::shared_ptr<const Matrix> solve_cached(const Vector& u, double p) const;

  /// Solution at 1-based time step `step`, evaluated at x_j = j / 2^level.
  Vector observe(const Matrix& trajectory, int step) const;

  /// One solve, observations stacked over all configured obs_steps.
  Vector observe_stacked(const Vector& u, double p) const;

  /// 0.1 |G(0.5 * 1_d, 1)|_2 over the stacked observations.
  double noise_scale() const { return noise_scale_; }

  double kappa_at(double x, const Vector& u) const;

 private:
  HeatModelConfig cfg_;
  HeatFem fem_;
  Matrix basis_at_quad_;  // (2 * n_elements) x d values of a_l at Gauss points
  Vector quad_points_;
  Vector load_unit_;      // load vector of rho_sigma (amplitude 1)
  double noise_scale_ = 0.0;
};

/// G_n = O_{t_n} . G: solve then observe at one fixed time step.
class HeatStepModel : public ForwardModel {
 public:
  HeatStepModel(std::shared_ptr<const HeatEquationSolver> solver, int obs_step);

  Eigen::Index param_dim() const override;
  Eigen::Index design_dim() const override { return 1; }
  Eigen::Index obs_dim() const override;
  Vector evaluate(const Vector& u, const Vector& p) const override;

  int obs_step() const { return obs_step_; }
  const HeatEquationSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<const HeatEquationSolver> solver_;
  int obs_step_;
};

}  // namespace seqboed
