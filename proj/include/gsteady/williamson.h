#pragma once

// Symplectic diagonalization of positive matrices and reservoir synthesis for
// a prescribed Gaussian steady state.

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"
#include "gsteady/symmetry.h"

namespace gsteady {

/// Symplectic eigenvalues mu_k of M > 0 (Spec(JM) = {+-i mu_k}), descending.
Vector symplectic_spectrum(const Eigen::Ref<const Matrix>& m, const Tolerances& tol = {});

struct WilliamsonDecomposition {
  Matrix s;
  // mu_1 <= .. <= mu_n
  Vector mu;

  /// diag(mu, mu)
  Matrix lambda() const;
};

/// S M S^T = Lambda and S J S^T = J, both validated before returning.
WilliamsonDecomposition williamson_decompose(const Eigen::Ref<const Matrix>& m,
                                             const Tolerances& tol = {});

/// ||W J W^T - J||_max <= tol.residual_tol * max(1, ||W||^2). Throws on odd size.
bool is_symplectic(const Eigen::Ref<const Matrix>& w, const Tolerances& tol = {});

/// All symplectic eigenvalues equal to one.
bool is_pure(const Eigen::Ref<const Matrix>& m, const Tolerances& tol = {});

struct EngineeredReservoir {
  Matrix gamma;
  Matrix diffusion;
  Matrix target;
  LindbladRealization realization;
  // solve(gamma, diffusion) and its relative distance to target.
  Matrix steady_state;
  double target_mismatch = 0.0;
  double lyapunov_residual = 0.0;
};

/// Gamma_p = S Gamma' S^-1, D_p = -alpha S (Gamma' + Gamma'^T) S^T, target
/// alpha S S^T. Gamma' defaults to -I/2.
EngineeredReservoir engineer_gibbs_target(const Eigen::Ref<const Matrix>& s, double alpha,
                                          const Tolerances& tol = {});
EngineeredReservoir engineer_gibbs_target(const Eigen::Ref<const Matrix>& s, double alpha,
                                          const Eigen::Ref<const Matrix>& gamma_prime,
                                          const Tolerances& tol = {});

/// Carries the triple (Lambda, Gamma', D') to (S^-1 Lambda S^-T, S^-1 Gamma' S,
/// S^-1 D' S^-T). The triple's cm must be present and solve its equation.
EngineeredReservoir engineer_covariant_target(const LyapunovTriple& triple,
                                              const Eigen::Ref<const Matrix>& s,
                                              const Tolerances& tol = {});

/// (Gamma' = -beta I, D' = 2 beta Lambda, cm = Lambda).
LyapunovTriple beta_reservoir(const Eigen::Ref<const Matrix>& lambda, double beta);

/// Two-mode squeezer [[c, s], [s, c]] (+) [[c, -s], [-s, c]] in block order.
Matrix two_mode_squeezer(double r);

/// The symplectic map taking the cascaded OPO with eps1 = 0 to a pure state;
/// requires |eps2| < kappa.
Matrix opo_purifier(double eps2, double kappa);

}  // namespace gsteady
