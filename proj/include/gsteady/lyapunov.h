#pragma once

// Lyapunov equations A P + P A^dagger + Q = 0 with A asymptotically stable.

#include <optional>
#include <string>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

/// Dense solve through the Kronecker form (I (x) A + conj(A) (x) I) vec(P) = -vec(Q).
/// Refuses non-stable A with StabilityError; the returned P is Hermitian and
/// satisfies ||AP + PA^dagger + Q||_max <= residual_tol * ||Q||_max.
CMatrix solve_lyapunov(const Eigen::Ref<const CMatrix>& a, const Eigen::Ref<const CMatrix>& q,
                       const Tolerances& tol = {});
/// Real instance: A, Q real gives real symmetric P.
Matrix solve_lyapunov(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& q,
                      const Tolerances& tol = {});

/// Steady-state covariance matrix V solving V Gamma^T + Gamma V + D = 0.
Matrix steady_state(const GaussianDynamics& dyn, const Tolerances& tol = {});

double lyapunov_residual(const Eigen::Ref<const CMatrix>& a, const Eigen::Ref<const CMatrix>& p,
                         const Eigen::Ref<const CMatrix>& q);
double lyapunov_residual(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& p,
                         const Eigen::Ref<const Matrix>& q);

struct IntegralSolution {
  CMatrix value;
  // Estimated norm of the neglected tail beyond the horizon.
  double truncation_bound = 0.0;
  // Set when the tail estimate exceeds the caller's tolerance.
  std::optional<std::string> warning;
};

/// Composite Simpson quadrature of int_0^horizon e^{At} Q e^{A^dagger t} dt.
/// Requires horizon >= 10/|abscissa|; steps is rounded up to an even count.
IntegralSolution solve_integral(const Eigen::Ref<const CMatrix>& a,
                                const Eigen::Ref<const CMatrix>& q, double horizon, int steps,
                                double tail_tol = 1e-8);

/// 40/|spectral abscissa|.
double default_horizon(const Eigen::Ref<const CMatrix>& a);
/// Step count keeping h * ||A|| near 0.02 (at least 200, even).
int default_quadrature_steps(const Eigen::Ref<const CMatrix>& a, double horizon);

/// e^A by scaling and squaring.
CMatrix matrix_exponential(const Eigen::Ref<const CMatrix>& a);

/// Q_[Xi] = Q - Xi A^dagger - A Xi.
CMatrix shifted_q(const Eigen::Ref<const CMatrix>& q, const Eigen::Ref<const CMatrix>& a,
                  const Eigen::Ref<const CMatrix>& xi, const Tolerances& tol = {});

struct SymmetricShift {
  CMatrix matrix;
  // Always true: the positivity of this matrix decides P + Xi >= 0 exactly.
  bool necessary_and_sufficient = true;
};

/// Q~_[Xi] = Q - (Xi A + A Xi) for self-adjoint A. Refuses non-self-adjoint A.
SymmetricShift shifted_q_symmetric(const Eigen::Ref<const CMatrix>& q,
                                   const Eigen::Ref<const CMatrix>& a,
                                   const Eigen::Ref<const CMatrix>& xi, const Tolerances& tol = {});

double complex_spectral_abscissa(const Eigen::Ref<const CMatrix>& a);

}  // namespace gsteady
