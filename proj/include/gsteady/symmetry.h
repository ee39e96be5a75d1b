#pragma once

// Covariance transformations of Lyapunov triples and the structural patterns
// they force on the steady state.

#include <optional>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

/// Invertible W acting as V -> W V W^T, Gamma -> W Gamma W^-1, D -> W D W^T.
struct CovarianceTransform {
  Matrix w;
  bool is_orthogonal = false;
  bool is_symplectic = false;

  /// Throws InvalidInput for non-square, odd-sized or singular W.
  static CovarianceTransform make(const Eigen::Ref<const Matrix>& w, const Tolerances& tol = {});
};

struct LyapunovTriple {
  Matrix gamma;
  Matrix diffusion;
  std::optional<Matrix> cm;
};

/// Applies W. When a CM is present and solved the input equation, the
/// transformed CM is residual-checked against the transformed equation.
LyapunovTriple transform_triple(const LyapunovTriple& t, const CovarianceTransform& w,
                                const Tolerances& tol = {});

struct InvarianceReport {
  bool gamma_invariant = false;
  bool d_invariant = false;
  // Both invariant and Gamma AS, so the solved V is invariant too.
  bool implies_v_invariant = false;
  // Only filled when implies_v_invariant.
  std::optional<double> v_defect;
};

/// Relative Frobenius comparison with tol.residual_tol.
InvarianceReport invariance_check(const Eigen::Ref<const Matrix>& gamma,
                                  const Eigen::Ref<const Matrix>& diffusion,
                                  const CovarianceTransform& w, const Tolerances& tol = {});

enum class StructureTemplate {
  // No q-p correlations: [[A, 0], [0, B]].
  BlockDiagonalQP,
  // Equal q and p blocks, symmetric cross block: [[A, C], [C, A]].
  SwapSymmetric,
  // Invariant under J: [[A, C], [-C, A]].
  JCommuting,
  // m1 I + m2 J with scalar m1, m2; invariant under every orthosymplectic R.
  KnInvariant,
  // [[G1, G2], [-G2, G1]] with diagonal G1, G2. Symmetric matrices of this
  // form are diag(v1..vn, v1..vn), the thermal CM pattern.
  LocalRotationInvariant,
};

const char* to_string(StructureTemplate s);

bool match_template(const Eigen::Ref<const Matrix>& m, StructureTemplate s,
                    const Tolerances& tol = {});

/// R = [[X, Y], [-Y, X]] with X + iY unitary; these are the orthogonal
/// symplectic matrices.
Matrix unitary_to_orthosymplectic(const Eigen::Ref<const CMatrix>& u);

/// Independent phase rotations on each mode.
Matrix local_rotation(const Eigen::Ref<const Vector>& angles);

/// Returns alpha when alpha (Gamma + Gamma^T) + D = 0 holds entrywise; the
/// steady state is then alpha I. Throws InvalidInput when Gamma + Gamma^T is
/// not negative semidefinite and StabilityError when Gamma is not AS.
std::optional<double> gibbs_condition(const Eigen::Ref<const Matrix>& gamma,
                                      const Eigen::Ref<const Matrix>& diffusion,
                                      const Tolerances& tol = {});
inline std::optional<double> gibbs_condition(const GaussianDynamics& dyn,
                                             const Tolerances& tol = {}) {
  return gibbs_condition(dyn.gamma, dyn.diffusion, tol);
}

}  // namespace gsteady
