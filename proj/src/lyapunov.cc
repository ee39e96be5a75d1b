#include "gsteady/lyapunov.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "gsteady/errors.h"

namespace gsteady {

namespace {

void require_square_pair(Eigen::Index a_rows, Eigen::Index a_cols, Eigen::Index q_rows,
                         Eigen::Index q_cols, const char* who) {
  if (a_rows != a_cols || q_rows != q_cols || a_rows != q_rows || a_rows == 0) {
    std::ostringstream os;
    os << who << ": A and Q must be square of equal non-zero size";
    throw InvalidInput(os.str());
  }
}

void refuse_unstable(double abscissa, const Tolerances& tol) {
  if (abscissa < -tol.stability_margin) return;
  std::ostringstream os;
  os.precision(17);
  os << "Lyapunov solve refused: A is not asymptotically stable (spectral abscissa " << abscissa
     << ")";
  throw StabilityError(os.str(), abscissa);
}

template <typename M>
M solve_vectorized(const M& a, const M& q) {
  using Scalar = typename M::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = a.rows();
  const Dense id = Dense::Identity(m, m);
  const Dense a_bar = a.conjugate();
  // Column-major vec: vec(AP) = (I (x) A) vec P, vec(P A^dagger) = (conj(A) (x) I) vec P.
  Dense k = Dense::Zero(m * m, m * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      auto block = k.block(i * m, j * m, m, m);
      if (i == j) block += a;
      block += a_bar(i, j) * id;
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs =
      -Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(q.data(), m * m);
  Eigen::PartialPivLU<Dense> lu(k);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = lu.solve(rhs);
  return Eigen::Map<Dense>(x.data(), m, m);
}

template <typename M>
void check_residual(const M& a, const M& p, const M& q, const Tolerances& tol) {
  const double res = max_abs(a * p + p * a.adjoint() + q);
  const double scale = max_abs(q);
  if (!std::isfinite(res) || res > tol.residual_tol * std::max(scale, 1e-300)) {
    if (scale == 0.0 && res == 0.0) return;
    std::ostringstream os;
    os.precision(6);
    os << "Lyapunov solver failure: residual " << res << " exceeds " << tol.residual_tol
       << " * ||Q|| = " << tol.residual_tol * scale;
    throw SolverError(os.str());
  }
}

}  // namespace

double complex_spectral_abscissa(const Eigen::Ref<const CMatrix>& a) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw SolverError("complex eigensolver failed");
  return es.eigenvalues().real().maxCoeff();
}

CMatrix solve_lyapunov(const Eigen::Ref<const CMatrix>& a, const Eigen::Ref<const CMatrix>& q,
                       const Tolerances& tol) {
  require_square_pair(a.rows(), a.cols(), q.rows(), q.cols(), "solve_lyapunov");
  if (hermiticity_defect(q) > tol.residual_tol * std::max(max_abs(q), 1e-300)) {
    throw InvalidInput("solve_lyapunov: Q is not Hermitian");
  }
  refuse_unstable(complex_spectral_abscissa(a), tol);
  const CMatrix am = a;
  const CMatrix qm = hermitized(q);
  CMatrix p = hermitized(solve_vectorized(am, qm));
  check_residual(am, p, qm, tol);
  return p;
}

Matrix solve_lyapunov(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& q,
                      const Tolerances& tol) {
  require_square_pair(a.rows(), a.cols(), q.rows(), q.cols(), "solve_lyapunov");
  if (max_abs(q - q.transpose()) > tol.residual_tol * std::max(max_abs(q), 1e-300)) {
    throw InvalidInput("solve_lyapunov: Q is not symmetric");
  }
  refuse_unstable(spectral_abscissa(a), tol);
  const Matrix am = a;
  const Matrix qm = symmetrized(q);
  Matrix p = symmetrized(solve_vectorized(am, qm));
  check_residual(am, p, qm, tol);
  return p;
}

Matrix steady_state(const GaussianDynamics& dyn, const Tolerances& tol) {
  return solve_lyapunov(dyn.gamma, dyn.diffusion, tol);
}

double lyapunov_residual(const Eigen::Ref<const CMatrix>& a, const Eigen::Ref<const CMatrix>& p,
                         const Eigen::Ref<const CMatrix>& q) {
  return max_abs(a * p + p * a.adjoint() + q);
}

double lyapunov_residual(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& p,
                         const Eigen::Ref<const Matrix>& q) {
  return max_abs(a * p + p * a.transpose() + q);
}

CMatrix matrix_exponential(const Eigen::Ref<const CMatrix>& a) {
  const CMatrix m = a;
  return m.exp();
}

double default_horizon(const Eigen::Ref<const CMatrix>& a) {
  const double abscissa = complex_spectral_abscissa(a);
  if (!(abscissa < 0.0)) throw StabilityError("default_horizon: A is not stable", abscissa);
  return 40.0 / std::abs(abscissa);
}

int default_quadrature_steps(const Eigen::Ref<const CMatrix>& a, double horizon) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double wanted = std::ceil(horizon * norm / 0.02);
  int steps = static_cast<int>(std::clamp(wanted, 200.0, 4.0e6));
  return steps + (steps % 2);
}

IntegralSolution solve_integral(const Eigen::Ref<const CMatrix>& a,
                                const Eigen::Ref<const CMatrix>& q, double horizon, int steps,
                                double tail_tol) {
  require_square_pair(a.rows(), a.cols(), q.rows(), q.cols(), "solve_integral");
  const double abscissa = complex_spectral_abscissa(a);
  if (!(abscissa < 0.0)) {
    throw StabilityError("solve_integral: A is not asymptotically stable", abscissa);
  }
  if (!(horizon >= 10.0 / std::abs(abscissa))) {
    std::ostringstream os;
    os << "solve_integral: horizon " << horizon << " is shorter than 10/|abscissa| = "
       << 10.0 / std::abs(abscissa);
    throw InvalidInput(os.str());
  }
  if (steps < 2) throw InvalidInput("solve_integral: need at least two steps");
  steps += steps % 2;

  const double h = horizon / steps;
  const CMatrix step = matrix_exponential(a * Complex(h, 0.0));
  CMatrix node = q;  // e^{A t_k} Q e^{A^dagger t_k}
  CMatrix sum = node;
  for (int k = 1; k <= steps; ++k) {
    node = step * node * step.adjoint();
    const double w = (k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * node;
  }
  IntegralSolution out;
  out.value = hermitized(sum * (h / 3.0));
  // The integrand decays at least like e^{2 abscissa t} once transients die out.
  out.truncation_bound = max_abs(node) / (2.0 * std::abs(abscissa));
  if (out.truncation_bound > tail_tol * std::max(max_abs(out.value), 1e-300)) {
    std::ostringstream os;
    os << "horizon may be too short: estimated tail " << out.truncation_bound;
    out.warning = os.str();
  }
  return out;
}

CMatrix shifted_q(const Eigen::Ref<const CMatrix>& q, const Eigen::Ref<const CMatrix>& a,
                  const Eigen::Ref<const CMatrix>& xi, const Tolerances& tol) {
  require_square_pair(a.rows(), a.cols(), q.rows(), q.cols(), "shifted_q");
  if (xi.rows() != q.rows() || xi.cols() != q.cols()) {
    throw InvalidInput("shifted_q: Xi has the wrong dimension");
  }
  if (hermiticity_defect(xi) > tol.residual_tol * std::max(max_abs(xi), 1e-300)) {
    throw InvalidInput("shifted_q: Xi is not Hermitian");
  }
  return hermitized(q - xi * a.adjoint() - a * xi);
}

SymmetricShift shifted_q_symmetric(const Eigen::Ref<const CMatrix>& q,
                                   const Eigen::Ref<const CMatrix>& a,
                                   const Eigen::Ref<const CMatrix>& xi, const Tolerances& tol) {
  require_square_pair(a.rows(), a.cols(), q.rows(), q.cols(), "shifted_q_symmetric");
  if (xi.rows() != q.rows() || xi.cols() != q.cols()) {
    throw InvalidInput("shifted_q_symmetric: Xi has the wrong dimension");
  }
  if (hermiticity_defect(xi) > tol.residual_tol * std::max(max_abs(xi), 1e-300)) {
    throw InvalidInput("shifted_q_symmetric: Xi is not Hermitian");
  }
  const double defect = hermiticity_defect(a);
  if (defect > tol.residual_tol * std::max(max_abs(a), 1e-300)) {
    std::ostringstream os;
    os << "shifted_q_symmetric: A is not self-adjoint (defect " << defect
       << "); the iff form does not apply";
    throw InvalidInput(os.str());
  }
  return {hermitized(q - (xi * a + a * xi)), true};
}

}  // namespace gsteady
