#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <sstream>
#include <vector>

#include "swflow/linalg.hpp"

namespace swflow {

// One mode of the switched plant: x' = A x + B u + E w.
struct LtiMode {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix E;  // n x q
};

// Switched LTI plant with shared output map y = C x + D w.
struct SwitchedPlant {
  std::vector<LtiMode> modes;
  Matrix C;  // p x n
  Matrix D;  // p x q

  int n() const { return static_cast<int>(modes.front().A.rows()); }
  int m() const { return static_cast<int>(modes.front().B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }
  int q() const { return static_cast<int>(modes.front().E.cols()); }
  int num_modes() const { return static_cast<int>(modes.size()); }

  void validate() const {
    if (modes.empty()) throw DimensionMismatch("plant: at least one mode required");
    const Eigen::Index nn = modes.front().A.rows();
    const Eigen::Index mm = modes.front().B.cols();
    const Eigen::Index qq = modes.front().E.cols();
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const LtiMode& md = modes[k];
      if (md.A.rows() != nn || md.A.cols() != nn || md.B.rows() != nn ||
          md.B.cols() != mm || md.E.rows() != nn || md.E.cols() != qq) {
        std::ostringstream os;
        os << "plant: mode " << (k + 1) << " dimensions differ from mode 1";
        throw DimensionMismatch(os.str());
      }
    }
    if (C.cols() != nn) throw DimensionMismatch("plant: C column count != n");
    if (D.rows() != C.rows() || D.cols() != qq)
      throw DimensionMismatch("plant: D must be p x q");
  }
};

// Lyapunov pair for one mode: A^T P + P A <= -Q with P, Q > 0.
struct StabilityCertificate {
  Matrix P;
  Matrix Q;
  double lambda_min_Q = 0.0;
  double lambda_min_P = 0.0;
  double lambda_max_P = 0.0;
};

// Steady-state input/disturbance-to-output gains G = -C A^{-1} B,
// H = D - C A^{-1} E.
struct SteadyStateMap {
  Matrix G;
  Matrix H;
  double norm_G = 0.0;
  double norm_H = 0.0;
};

inline std::vector<std::complex<double>> mode_eigenvalues(const LtiMode& mode) {
  Eigen::EigenSolver<Matrix> es(mode.A);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("mode_eigenvalues: eigen iteration did not converge");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(mode.A.rows()));
  for (Eigen::Index i = 0; i < mode.A.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

// Hurwitz with margin: every eigenvalue real part < -1e-9.
inline bool is_hurwitz(const LtiMode& mode, double margin = 1e-9) {
  for (const auto& ev : mode_eigenvalues(mode))
    if (ev.real() >= -margin) return false;
  return true;
}

// Solves A^T P + P A = -Q for symmetric positive definite P.
// The vectorized system (I (x) A^T + A^T (x) I) vec(P) = -vec(Q) is dense
// but small (n <= a few tens in this artifact).
inline Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n)
    throw DimensionMismatch("solve_lyapunov: A and Q must be square of equal size");
  if (!is_symmetric(Q) || lambda_min_sym(Q) <= 0.0)
    throw std::invalid_argument("solve_lyapunov: Q must be symmetric positive definite");
  if (!is_hurwitz(LtiMode{A, Matrix::Zero(n, 0), Matrix::Zero(n, 0)}))
    throw NotHurwitz("solve_lyapunov: A has an eigenvalue with real part >= 0");

  Matrix K = Matrix::Zero(n * n, n * n);
  // vec(A^T P + P A) = (I (x) A^T) vec(P) + (A^T (x) I) vec(P)
  for (Eigen::Index j = 0; j < n; ++j)
    K.block(j * n, j * n, n, n) += A.transpose();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k)
        K(j * n + i, k * n + i) += A(k, j);

  Vector q(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) q(j * n + i) = -Q(i, j);

  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible())
    throw SingularSystem("solve_lyapunov: vectorized Lyapunov system is singular");
  Vector pv = lu.solve(q);

  Matrix P(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) P(i, j) = pv(j * n + i);
  P = 0.5 * (P + P.transpose());

  const double resid = spectral_norm(A.transpose() * P + P * A + Q);
  if (resid > 1e-9 * spectral_norm(Q))
    throw SingularSystem("solve_lyapunov: residual exceeds 1e-9 * ||Q||");
  return P;
}

// Default certificate: Q = I, P from the Lyapunov solve. An explicit (P, Q)
// pair may be supplied instead; it is validated and its eigen-extremes are
// filled in.
inline StabilityCertificate mode_certificate(const LtiMode& mode,
                                             std::optional<Matrix> P_override = std::nullopt,
                                             std::optional<Matrix> Q_override = std::nullopt) {
  const Eigen::Index n = mode.A.rows();
  StabilityCertificate cert;
  cert.Q = Q_override ? *Q_override : Matrix::Identity(n, n);
  if (P_override) {
    cert.P = *P_override;
    const double tol = 1e-8 * spectral_norm(cert.Q);
    if (lambda_max_sym(mode.A.transpose() * cert.P + cert.P * mode.A + cert.Q) > tol)
      throw NotHurwitz("mode_certificate: supplied (P, Q) do not satisfy A^T P + P A <= -Q");
  } else {
    cert.P = solve_lyapunov(mode.A, cert.Q);
  }
  cert.lambda_min_Q = lambda_min_sym(cert.Q);
  cert.lambda_min_P = lambda_min_sym(cert.P);
  cert.lambda_max_P = lambda_max_sym(cert.P);
  if (cert.lambda_min_P <= 0.0 || cert.lambda_min_Q <= 0.0)
    throw NotHurwitz("mode_certificate: certificate matrices are not positive definite");
  return cert;
}

namespace detail {
inline Eigen::FullPivLU<Matrix> invertible_lu(const Matrix& A, const char* who) {
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw SingularA(std::string(who) + ": A is singular to working precision");
  return lu;
}
}  // namespace detail

inline SteadyStateMap steady_state_maps(const LtiMode& mode, const Matrix& C, const Matrix& D) {
  auto lu = detail::invertible_lu(mode.A, "steady_state_maps");
  SteadyStateMap out;
  out.G = -C * lu.solve(mode.B);
  out.H = D - C * lu.solve(mode.E);
  out.norm_G = spectral_norm(out.G);
  out.norm_H = spectral_norm(out.H);
  return out;
}

struct CommonMapsReport {
  bool common = false;
  double max_deviation = 0.0;
};

inline CommonMapsReport check_common_maps(const SwitchedPlant& plant, double tol) {
  plant.validate();
  CommonMapsReport rep;
  const SteadyStateMap ref = steady_state_maps(plant.modes.front(), plant.C, plant.D);
  for (std::size_t k = 1; k < plant.modes.size(); ++k) {
    const SteadyStateMap mk = steady_state_maps(plant.modes[k], plant.C, plant.D);
    rep.max_deviation = std::max(rep.max_deviation, spectral_norm(mk.G - ref.G));
    rep.max_deviation = std::max(rep.max_deviation, spectral_norm(mk.H - ref.H));
  }
  rep.common = rep.max_deviation <= tol;
  return rep;
}

inline Vector equilibrium_state(const LtiMode& mode, const Vector& u, const Vector& w) {
  if (u.size() != mode.B.cols() || w.size() != mode.E.cols())
    throw DimensionMismatch("equilibrium_state: input/disturbance dimension mismatch");
  auto lu = detail::invertible_lu(mode.A, "equilibrium_state");
  return lu.solve(-(mode.B * u + mode.E * w));
}

}  // namespace swflow
