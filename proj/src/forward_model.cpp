#include "seqboed/forward_model.hpp"

#include "seqboed/errors.hpp"

namespace seqboed {

Matrix ForwardModel::evaluate_ensemble(const Matrix& U, const Vector& p) const {
  Matrix out(U.rows(), obs_dim());
  for (Eigen::Index j = 0; j < U.rows(); ++j) {
    try {
      out.row(j) = evaluate(U.row(j).transpose(), p).transpose();
    } catch (const ForwardModelError& e) {
      throw ForwardModelError(e.what(), j);
    }
  }
  return out;
}

namespace {
void check_finite(const Vector& g, const char* name) {
  if (!g.allFinite()) throw ForwardModelError(std::string(name) + ": non-finite output");
}
}  // namespace

LinearModel::LinearModel(LinearModelConfig cfg) : cfg_(cfg) {
  if (cfg_.c <= 0.0) throw InvalidArgumentError("LinearModel: c must be positive");
}

Vector LinearModel::evaluate(const Vector& u, const Vector& p) const {
  Vector g = Vector::Constant(1, linear_eval(cfg_, u(0), p(0)));
  check_finite(g, "LinearModel");
  return g;
}

Matrix LinearModel::evaluate_ensemble(const Matrix& U, const Vector& p) const {
  Matrix g = amplitude(p(0)) * U.col(0);
  if (!g.allFinite()) throw ForwardModelError("LinearModel: non-finite output");
  return g;
}

NearLinearModel::NearLinearModel(NearLinearModelConfig cfg) : cfg_(cfg) {
  if (cfg_.c <= 0.0) throw InvalidArgumentError("NearLinearModel: c must be positive");
}

Vector NearLinearModel::evaluate(const Vector& u, const Vector& p) const {
  Vector g = Vector::Constant(1, near_linear_eval(cfg_, u(0), p(0)));
  check_finite(g, "NearLinearModel");
  return g;
}

Matrix NearLinearModel::evaluate_ensemble(const Matrix& U, const Vector& p) const {
  Matrix g = amplitude(p(0)) * U.col(0) + cfg_.tau * U.col(0).cwiseProduct(U.col(0));
  if (!g.allFinite()) throw ForwardModelError("NearLinearModel: non-finite output");
  return g;
}

AffineForwardModel::AffineForwardModel(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size())
    throw InvalidArgumentError("AffineForwardModel: A rows must match b size");
}

Vector AffineForwardModel::evaluate(const Vector& u, const Vector&) const {
  Vector g = A_ * u + b_;
  check_finite(g, "AffineForwardModel");
  return g;
}

Matrix AffineForwardModel::evaluate_ensemble(const Matrix& U, const Vector&) const {
  Matrix g = (U * A_.transpose()).rowwise() + b_.transpose();
  if (!g.allFinite()) throw ForwardModelError("AffineForwardModel: non-finite output");
  return g;
}

}  // namespace seqboed
