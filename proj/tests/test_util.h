#pragma once

#include <random>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady::testing {

inline Matrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

inline Matrix random_positive(std::mt19937& rng, int dim, double floor = 0.5) {
  const Matrix b = random_matrix(rng, dim, dim);
  return b * b.transpose() + floor * Matrix::Identity(dim, dim);
}

/// Random stable matrix: B shifted left of the imaginary axis.
inline Matrix random_stable(std::mt19937& rng, int dim) {
  const Matrix b = random_matrix(rng, dim, dim);
  const double a = spectral_abscissa(b);
  return b - (a + 0.5) * Matrix::Identity(dim, dim);
}

/// Random quadratic model: one loss channel per mode plus n random channels.
/// Callers filter out the occasional unstable draw.
inline ModelSpec random_model(std::mt19937& rng, int n, double h_scale = 1.0, double noise = 0.3) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  ModelSpec m;
  const Matrix h = random_matrix(rng, 2 * n, 2 * n);
  m.hamiltonian.hessian = 0.5 * h_scale * (h + h.transpose());
  m.hamiltonian.xi = random_matrix(rng, 2 * n, 1);
  for (int k = 0; k < n; ++k) m.lindblad.push_back(annihilation(n, k, u(rng)));
  for (int extra = 0; extra < n; ++extra) {
    LindbladVector l;
    l.lambda = CVector(2 * n);
    l.lambda.real() = noise * random_matrix(rng, 2 * n, 1);
    l.lambda.imag() = noise * random_matrix(rng, 2 * n, 1);
    m.lindblad.push_back(l);
  }
  return m;
}

}  // namespace gsteady::testing
