#pragma once

#include "swflow/linalg.hpp"
#include "swflow/plant.hpp"

namespace swflow {

// Seeded Hurwitz matrix: A = M - (lambda_max((M + M^T)/2) + margin) I with
// M uniform in [-1, 1]. The shift makes A + A^T negative definite, so A is
// Hurwitz with at least the given margin.
inline Matrix random_hurwitz(Rng& rng, int n, double margin = 0.5) {
  Matrix m = rng.matrix(n, n);
  const double shift = lambda_max_sym(m) + margin;
  return m - shift * Matrix::Identity(n, n);
}

// Two-mode plant with exactly common equilibria: mode 2 reuses
// B2 = A2 A1^{-1} B1 and E2 = A2 A1^{-1} E1, which makes
// -A2^{-1} B2 = -A1^{-1} B1 and likewise for E, so the steady-state maps
// are mode-independent.
inline SwitchedPlant random_switched_plant(Rng& rng, int n, int m, int p, int q, int num_modes,
                                           double margin = 0.5) {
  SwitchedPlant plant;
  LtiMode mode1;
  mode1.A = random_hurwitz(rng, n, margin);
  mode1.B = rng.matrix(n, m);
  mode1.E = rng.matrix(n, q);
  plant.modes.push_back(mode1);
  Eigen::FullPivLU<Matrix> lu1(mode1.A);
  for (int k = 1; k < num_modes; ++k) {
    LtiMode mk;
    mk.A = random_hurwitz(rng, n, margin);
    mk.B = mk.A * lu1.solve(mode1.B);
    mk.E = mk.A * lu1.solve(mode1.E);
    plant.modes.push_back(mk);
  }
  plant.C = rng.matrix(p, n);
  plant.D = rng.matrix(p, q);
  return plant;
}

}  // namespace swflow
