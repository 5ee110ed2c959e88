#pragma once

#include <stdexcept>
#include <string>

namespace seqboed {

/// Bad caller input (dimension mismatches, too few samples, invalid config values).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or repair step found a matrix that is not usable even
/// after the documented jitter/clipping policy. Carries the offending pivot.
class NumericalDegeneracyError : public std::runtime_error {
 public:
  NumericalDegeneracyError(const std::string& what, double smallest_pivot)
      : std::runtime_error(what + " (smallest pivot " + std::to_string(smallest_pivot) + ")"),
        smallest_pivot_(smallest_pivot) {}
  double smallest_pivot() const { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

/// A particle became non-finite and step halving could not recover.
class DivergedSamplerError : public std::runtime_error {
 public:
  DivergedSamplerError(const std::string& what, long step_index)
      : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
        step_index_(step_index) {}
  long step_index() const { return step_index_; }

 private:
  long step_index_;
};

/// The EIG-to-loss transform was asked for sqrt of a non-positive radicand.
class LossTransformDomainError : public std::runtime_error {
 public:
  LossTransformDomainError(double eig_value, double c_shift)
      : std::runtime_error("loss transform domain error: eig estimate " +
                           std::to_string(eig_value) + " >= c_shift " + std::to_string(c_shift) +
                           "; raise c_shift above the maximal EIG over the design domain"),
        eig_value_(eig_value),
        c_shift_(c_shift) {}
  double eig_value() const { return eig_value_; }
  double c_shift() const { return c_shift_; }

 private:
  double eig_value_;
  double c_shift_;
};

/// Forward model produced a non-finite output or failed internally.
class ForwardModelError : public std::runtime_error {
 public:
  explicit ForwardModelError(const std::string& what, long particle_index = -1)
      : std::runtime_error(particle_index >= 0
                               ? what + " (particle " + std::to_string(particle_index) + ")"
                               : what),
        particle_index_(particle_index) {}
  long particle_index() const { return particle_index_; }

 private:
  long particle_index_ = -1;
};

/// Adaptive ODE integration gave up (too many rejections or steps).
class IntegratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seqboed
