#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace seqboed {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Splittable deterministic random stream.
///
/// substream(label) derives an independent stream from the (original seed,
/// label) pair, not from the current generator state, so a consumer's draws
/// do not depend on what its siblings consumed. Draw order within a stream
/// is part of the reproducibility contract.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : seed_(seed), gen_(detail::splitmix64(detail::splitmix64(seed))) {}

  RngStream substream(std::uint64_t label) const {
    std::uint64_t mixed = detail::splitmix64(seed_ ^ (0xD1B54A32D192ED03ULL * (label + 1)));
    return RngStream(mixed);
  }

  std::uint64_t seed() const { return seed_; }

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }  // U[0,1)

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Row-major fill.
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * uniform();
    return v;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace seqboed
