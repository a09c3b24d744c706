#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "swflow/errors.hpp"

namespace swflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Spectral norm (largest singular value) by power iteration on M^T M,
// relative tolerance 1e-12 on the squared value.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix mtm = m.transpose() * m;
  const Eigen::Index n = mtm.rows();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 200000; ++iter) {
    Vector w = mtm * v;
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    v = w / norm_w;
    const double next = v.dot(mtm * v);
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

inline double lambda_min_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

inline double lambda_max_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().maxCoeff();
}

inline bool is_symmetric(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// Seeded uniform generator with a pinned output mapping, so that scenario
// generation is bit-reproducible independent of the standard library's
// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed != 0 ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in {0, ..., n-1}
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

  Vector vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  // random SPD matrix with eigenvalues in [lo, hi]
  Matrix spd(Eigen::Index n, double lo, double hi) {
    Matrix g = matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    return q * d.asDiagonal() * q.transpose();
  }

 private:
  std::uint64_t state_;
};

}  // namespace swflow
