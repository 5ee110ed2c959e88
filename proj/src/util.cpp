#include "seqboed/util.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace seqboed {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }
int thread_count() { return g_threads.load(); }

void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& f) {
  const int workers = std::min<Eigen::Index>(thread_count(), n);
  if (workers <= 1 || n < 64) {
    for (Eigen::Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<Eigen::Index> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      const Eigen::Index chunk = 16;
      for (;;) {
        Eigen::Index begin = next.fetch_add(chunk);
        if (begin >= n) break;
        Eigen::Index end = std::min(begin + chunk, n);
        for (Eigen::Index i = begin; i < end; ++i) f(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0)
      throw std::invalid_argument("fit_loglog_slope: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_slope(lx, ly);
}

double batch_means_se(const Eigen::VectorXd& terms, int n_batches) {
  const Eigen::Index n = terms.size();
  if (n < n_batches || n_batches < 2) return 0.0;
  const Eigen::Index base = n / n_batches;
  Eigen::VectorXd means(n_batches);
  Eigen::Index pos = 0;
  for (int b = 0; b < n_batches; ++b) {
    // spread the remainder over the first batches
    const Eigen::Index len = base + (b < n % n_batches ? 1 : 0);
    means[b] = terms.segment(pos, len).mean();
    pos += len;
  }
  const double mu = means.mean();
  const double var = (means.array() - mu).square().sum() / (n_batches - 1);
  return std::sqrt(var / n_batches);
}

void warn(const std::string& message) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[seqboed:warn] " << message << "\n";
}

}  // namespace seqboed
