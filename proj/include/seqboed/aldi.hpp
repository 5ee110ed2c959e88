#pragma once

#include <vector>

#include "seqboed/rng.hpp"
#include "seqboed/target.hpp"

namespace seqboed {

struct ParticleEnsemble {
  Matrix particles;  // J x d
  long step_count = 0;

  Eigen::Index size() const { return particles.rows(); }
  Eigen::Index dim() const { return particles.cols(); }
};

struct AldiOptions {
  double dt = 0.01;
  double t_end = 10.0;
  int max_halvings = 4;     // retry depth when a step goes non-finite
  int snapshot_interval = 50;
};

struct AldiDiagnosticsRow {
  long step;
  Vector mean;
  double cov_trace;
};

struct AldiDiagnostics {
  std::vector<AldiDiagnosticsRow> rows;
  bool degenerate_ensemble_warning = false;  // collapsed ensemble seen
  bool small_ensemble_warning = false;       // J < d + 2 ergodicity condition
  bool nonstationary_warning = false;        // mean still drifting at the end
};

/// Non-symmetric ensemble square root, S = J^{-1/2} (u_j - ubar)_j in
/// R^{d x J} with S S^T equal to the 1/J-normalized ensemble covariance.
Matrix aldi_nonsymmetric_sqrt(const Matrix& particles);

/// Gradient-free drift surrogate (without the (d+1)/J correction term):
///   sum_l C_{u,G_l} Gamma^-1 (y_l - G_l(u_j, p_l)) - C_u Sigma0^-1 (u_j - m0)
/// per particle, rows of the result. Covariances use 1/J normalization.
Matrix aldi_gradient_free_drift(const Matrix& particles, const SequentialTarget& target);

/// Gradient drift -C_u grad I(u_j) with finite-difference model Jacobians
/// (central, relative step 1e-5).
Matrix aldi_gradient_drift(const Matrix& particles, const SequentialTarget& target);

/// One Euler-Maruyama step of the gradient-free ALDI SDE. Retries with halved
/// substeps (up to max_halvings deep) when particles go non-finite and throws
/// DivergedSamplerError if that fails too.
ParticleEnsemble aldi_step(const ParticleEnsemble& ens, const SequentialTarget& target,
                           double dt, RngStream& rng, AldiDiagnostics* diag = nullptr,
                           int max_halvings = 4);

/// Gradient-based reference sampler (same correction and noise terms).
ParticleEnsemble aldi_step_gradient(const ParticleEnsemble& ens, const SequentialTarget& target,
                                    double dt, RngStream& rng, int max_halvings = 4);

/// ceil(t_end/dt) steps of aldi_step with per-step substreams of rng.
ParticleEnsemble aldi_run(ParticleEnsemble init, const SequentialTarget& target,
                          const AldiOptions& opts, RngStream rng,
                          AldiDiagnostics* diag = nullptr);

/// Same driver around the gradient-based step.
ParticleEnsemble aldi_run_gradient(ParticleEnsemble init, const SequentialTarget& target,
                                   const AldiOptions& opts, RngStream rng,
                                   AldiDiagnostics* diag = nullptr);

}  // namespace seqboed
