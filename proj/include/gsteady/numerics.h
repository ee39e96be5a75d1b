#pragma once

// Phase-space conventions shared by every module.
//
// Canonical operators are stored in block order x = (q_1..q_n, p_1..p_n) with
// hbar = 1. The interleaved order (q_1, p_1, .., q_n, p_n) only appears as a
// view produced by reorder().

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace gsteady {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

enum class Layout { BlockQP, InterleavedQP };

struct ModeOrdering {
  int n = 1;
  Layout layout = Layout::BlockQP;
};

struct Tolerances {
  // An eigenvalue nu counts as zero when |nu| <= eig_zero_band * max(1, max|nu_k|).
  double eig_zero_band = 1e-9;
  // Gamma is asymptotically stable iff its spectral abscissa < -stability_margin.
  double stability_margin = 1e-10;
  // Relative bound on Lyapunov residuals, Hermiticity defects and equality tests.
  double residual_tol = 1e-9;

  // Throws InvalidInput unless every field is finite and strictly positive.
  void validate() const;
};

struct InertiaIndex {
  int n_plus = 0;
  int n_zero = 0;
  int n_minus = 0;

  int dimension() const { return n_plus + n_zero + n_minus; }
  bool operator==(const InertiaIndex&) const = default;
};

enum class Definiteness { PositiveDefinite, PositiveSemidefiniteMarginal, Indefinite };

const char* to_string(Definiteness d);

/// The 2n x 2n block matrix [[0, I], [-I, 0]].
Matrix symplectic_form(int n);

/// Mode count of a 2n x 2n matrix; throws if the matrix is not square and even.
int mode_count(const Eigen::Ref<const Matrix>& m);

/// Largest |M_ij - conj(M_ji)|.
double hermiticity_defect(const Eigen::Ref<const CMatrix>& m);

/// Ascending real spectrum of a self-adjoint matrix. Rejects inputs with
/// ||M - M^dagger||_max > residual_tol * ||M||_max, naming the defect.
Vector hermitian_spectrum(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol);
Vector hermitian_spectrum(const Eigen::Ref<const Matrix>& m, const Tolerances& tol);

/// Sign counts of an already computed real spectrum, using the relative zero band.
InertiaIndex inertia_of_spectrum(const Eigen::Ref<const Vector>& spectrum, const Tolerances& tol);

InertiaIndex inertia(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol);
InertiaIndex inertia(const Eigen::Ref<const Matrix>& m, const Tolerances& tol);

Definiteness definiteness_of(const InertiaIndex& in);
Definiteness psd_verdict(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol);
Definiteness psd_verdict(const Eigen::Ref<const Matrix>& m, const Tolerances& tol);

/// Eigenvalues of a general real matrix sorted by real part, then imaginary part.
std::vector<Complex> sorted_spectrum(const Eigen::Ref<const Matrix>& m);

/// max Re(lambda) over the spectrum.
double spectral_abscissa(const Eigen::Ref<const Matrix>& m);

/// Block-order index of each interleaved slot: (0, n, 1, n+1, ..).
std::vector<int> interleaved_source(int n);

/// Congruence M -> P M P^T by the qp reordering permutation.
Matrix reorder(const Eigen::Ref<const Matrix>& m, ModeOrdering from, Layout to);

/// Largest absolute entry, 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix symmetrized(const Eigen::Ref<const Matrix>& m) { return 0.5 * (m + m.transpose()); }
inline CMatrix hermitized(const Eigen::Ref<const CMatrix>& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace gsteady
