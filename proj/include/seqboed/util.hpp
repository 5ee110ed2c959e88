#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace seqboed {

/// Process-wide worker count for ensemble loops. 1 = serial.
void set_thread_count(int n);
int thread_count();

/// Runs f(i) for i in [0, n). Each index must write only its own slot of any
/// shared output; with that discipline results are identical for any thread
/// count. Falls back to a plain loop when thread_count() == 1 or n is small.
void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& f);

/// Linear-interpolation sample quantile (the common "type 7" rule), q in [0,1].
double quantile(std::vector<double> values, double q);

/// Least-squares slope of log(y) against log(x). Inputs must be positive.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

inline bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.allFinite();
}

/// Batch-means standard error of the mean of `terms` (10 batches by default).
/// Returns 0 for fewer terms than batches.
double batch_means_se(const Eigen::VectorXd& terms, int n_batches = 10);

void warn(const std::string& message);

}  // namespace seqboed
