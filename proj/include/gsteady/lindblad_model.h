#pragma once

// Quadratic Hamiltonians with linear Lindblad operators, and the Gaussian
// moment dynamics they generate:
//
//   H = 1/2 x.Hx + xi.Jx + H0,    L_m = lambda_m.Jx + mu_m
//   d<x>/dt = (xi - eta) + Gamma <x>
//   dV/dt   = Gamma V + V Gamma^T + D
//
// with Upsilon = sum_m lambda_m lambda_m^dagger, Gamma = JH - Im(Upsilon) J,
// D = 2 Re(Upsilon) and eta = sum_m Im(conj(mu_m) lambda_m).

#include <span>
#include <vector>

#include "gsteady/numerics.h"

namespace gsteady {

struct QuadraticHamiltonian {
  Matrix hessian;
  Vector xi;
  double offset = 0.0;

  int modes() const { return static_cast<int>(hessian.rows() / 2); }
  static QuadraticHamiltonian zero(int n);
};

struct LindbladVector {
  CVector lambda;
  Complex mu{0.0, 0.0};
};

struct ModelSpec {
  QuadraticHamiltonian hamiltonian;
  std::vector<LindbladVector> lindblad;

  int modes() const { return hamiltonian.modes(); }
};

struct GaussianDynamics {
  Matrix gamma;
  Matrix diffusion;
  CMatrix upsilon;
  Vector eta;
  // xi - eta
  Vector drift;

  int modes() const { return static_cast<int>(gamma.rows() / 2); }
};

/// Lindblad vector for L = sum_k (q_coeff_k q_k + p_coeff_k p_k) + mu.
LindbladVector lindblad_from_quadratures(const CVector& q_coeff, const CVector& p_coeff,
                                         Complex mu = {});
/// sqrt(rate) * a_mode with a = (q + i p)/sqrt(2); mode is 0-based.
LindbladVector annihilation(int n, int mode, double rate);
/// sqrt(rate) * a_mode^dagger.
LindbladVector creation(int n, int mode, double rate);

GaussianDynamics build_dynamics(const QuadraticHamiltonian& ham,
                                std::span<const LindbladVector> lindblad,
                                const Tolerances& tol = {});
GaussianDynamics build_dynamics(const ModelSpec& model, const Tolerances& tol = {});

struct StabilityReport {
  bool asymptotically_stable = false;
  // Abscissa within +-stability_margin of zero.
  bool marginal = false;
  double spectral_abscissa = 0.0;
  std::vector<Complex> spectrum;
};

StabilityReport stability_check(const Eigen::Ref<const Matrix>& gamma, const Tolerances& tol = {});
inline StabilityReport stability_check(const GaussianDynamics& dyn, const Tolerances& tol = {}) {
  return stability_check(dyn.gamma, tol);
}

/// Throws StabilityError (with the abscissa) unless gamma is asymptotically stable.
void require_stable(const Eigen::Ref<const Matrix>& gamma, const Tolerances& tol);

/// Stationary mean: solves (xi - eta) + Gamma x = 0.
Vector mean_fixed_point(const GaussianDynamics& dyn, const Tolerances& tol = {});

struct LindbladRealization {
  Matrix hessian;
  CMatrix upsilon;
  std::vector<CVector> lambdas;
};

/// Inverts the model -> (Gamma, D) map. The Hessian comes from the symmetric
/// part of Gamma J^T and Im(Upsilon) from its antisymmetric part; the lambda
/// vectors are sqrt(nu_m) u_m over the eigenpairs of Upsilon above the zero
/// band. Throws RealizabilityError when Upsilon has a negative eigenvalue.
LindbladRealization realize_lindblad(const Eigen::Ref<const Matrix>& gamma,
                                     const Eigen::Ref<const Matrix>& diffusion,
                                     const Tolerances& tol = {});

ModelSpec to_model(const LindbladRealization& realization);

}  // namespace gsteady
