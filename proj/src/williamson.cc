#include "gsteady/williamson.h"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"

namespace gsteady {

namespace {

struct RootPair {
  Matrix sqrt_m;
  Matrix inv_sqrt_m;
};

RootPair roots_of(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  mode_count(m);
  if (max_abs(m - m.transpose()) > tol.residual_tol * std::max(max_abs(m), 1e-300)) {
    throw InvalidInput("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m));
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigensolver failed");
  const Vector& ev = es.eigenvalues();
  const double band = tol.eig_zero_band * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (!(ev(0) > band)) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix is not positive definite (smallest eigenvalue " << ev(0) << ")";
    throw InvalidInput(os.str());
  }
  const Matrix& u = es.eigenvectors();
  return {u * ev.cwiseSqrt().asDiagonal() * u.transpose(),
          u * ev.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose()};
}

// Eigenpairs of the Hermitian i K with K = M^1/2 J M^1/2; the upper half of
// the ascending spectrum holds +mu_k.
Eigen::SelfAdjointEigenSolver<CMatrix> ik_eigen(const Matrix& sqrt_m) {
  const int n = static_cast<int>(sqrt_m.rows() / 2);
  const Matrix k = sqrt_m * symplectic_form(n) * sqrt_m;
  const CMatrix ik = Complex(0.0, 1.0) * (0.5 * (k - k.transpose())).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(ik);
  if (es.info() != Eigen::Success) throw SolverError("Hermitian eigensolver failed");
  return es;
}

}  // namespace

Vector symplectic_spectrum(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  const auto r = roots_of(m, tol);
  const auto es = ik_eigen(r.sqrt_m);
  const int n = static_cast<int>(m.rows() / 2);
  return es.eigenvalues().tail(n).reverse();
}

Matrix WilliamsonDecomposition::lambda() const {
  const auto n = mu.size();
  Vector d(2 * n);
  d << mu, mu;
  return d.asDiagonal();
}

WilliamsonDecomposition williamson_decompose(const Eigen::Ref<const Matrix>& m,
                                             const Tolerances& tol) {
  const int n = mode_count(m);
  const auto r = roots_of(m, tol);
  const auto es = ik_eigen(r.sqrt_m);

  WilliamsonDecomposition out;
  out.mu = es.eigenvalues().tail(n);
  Matrix o(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const CVector w = es.eigenvectors().col(n + k);
    o.col(k) = std::sqrt(2.0) * w.real();
    o.col(n + k) = -std::sqrt(2.0) * w.imag();
  }
  out.s = out.lambda().cwiseSqrt() * o.transpose() * r.inv_sqrt_m;

  const Matrix j = symplectic_form(n);
  const double diag_gap = max_abs(out.s * m * out.s.transpose() - out.lambda());
  const double form_gap = max_abs(out.s * j * out.s.transpose() - j);
  if (diag_gap > tol.residual_tol * std::max(1.0, max_abs(m)) || form_gap > tol.residual_tol) {
    std::ostringstream os;
    os << "williamson_decompose: validation failed (||SMS^T - Lambda|| = " << diag_gap
       << ", ||SJS^T - J|| = " << form_gap << ")";
    throw SolverError(os.str());
  }
  return out;
}

bool is_symplectic(const Eigen::Ref<const Matrix>& w, const Tolerances& tol) {
  if (w.rows() != w.cols() || w.rows() % 2 != 0 || w.rows() == 0) {
    throw InvalidInput("is_symplectic: matrix must be square with even dimension");
  }
  const Matrix j = symplectic_form(static_cast<int>(w.rows() / 2));
  const double scale = std::max(1.0, max_abs(w) * max_abs(w));
  return max_abs(w * j * w.transpose() - j) <= tol.residual_tol * scale;
}

bool is_pure(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  const Vector mu = symplectic_spectrum(m, tol);
  return (mu.array() - 1.0).abs().maxCoeff() <= std::sqrt(tol.residual_tol);
}

namespace {

void finish_reservoir(EngineeredReservoir& out, const Tolerances& tol) {
  require_stable(out.gamma, tol);
  out.steady_state = solve_lyapunov(out.gamma, out.diffusion, tol);
  out.lyapunov_residual = gsteady::lyapunov_residual(out.gamma, out.steady_state, out.diffusion);
  out.target_mismatch = max_abs(out.steady_state - out.target) / std::max(max_abs(out.target), 1e-300);
  if (out.target_mismatch > 1e-8) {
    std::ostringstream os;
    os << "engineered reservoir misses its target (relative mismatch " << out.target_mismatch
       << ")";
    throw SolverError(os.str());
  }
  out.realization = realize_lindblad(out.gamma, out.diffusion, tol);
}

void require_symplectic(const Eigen::Ref<const Matrix>& s, const Tolerances& tol) {
  if (!is_symplectic(s, tol)) throw InvalidInput("transformation is not symplectic");
}

}  // namespace

EngineeredReservoir engineer_gibbs_target(const Eigen::Ref<const Matrix>& s, double alpha,
                                          const Tolerances& tol) {
  return engineer_gibbs_target(s, alpha, -0.5 * Matrix::Identity(s.rows(), s.cols()), tol);
}

EngineeredReservoir engineer_gibbs_target(const Eigen::Ref<const Matrix>& s, double alpha,
                                          const Eigen::Ref<const Matrix>& gamma_prime,
                                          const Tolerances& tol) {
  require_symplectic(s, tol);
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InvalidInput("engineer_gibbs_target: alpha must be a finite number >= 1");
  }
  if (gamma_prime.rows() != s.rows() || gamma_prime.cols() != s.cols()) {
    throw InvalidInput("engineer_gibbs_target: Gamma' has the wrong dimension");
  }
  const Matrix sym = gamma_prime + gamma_prime.transpose();
  if (psd_verdict(Matrix(-sym), tol) == Definiteness::Indefinite) {
    throw InvalidInput("engineer_gibbs_target: Gamma' + Gamma'^T is not negative semidefinite");
  }
  require_stable(gamma_prime, tol);

  EngineeredReservoir out;
  out.gamma = s * gamma_prime * s.inverse();
  out.diffusion = symmetrized(-alpha * s * sym * s.transpose());
  out.target = symmetrized(alpha * s * s.transpose());
  finish_reservoir(out, tol);
  return out;
}

EngineeredReservoir engineer_covariant_target(const LyapunovTriple& triple,
                                              const Eigen::Ref<const Matrix>& s,
                                              const Tolerances& tol) {
  require_symplectic(s, tol);
  if (!triple.cm) throw InvalidInput("engineer_covariant_target: the triple needs its CM");
  const double res = lyapunov_residual(triple.gamma, *triple.cm, triple.diffusion);
  const double scale = std::max({max_abs(triple.diffusion), max_abs(triple.gamma) * max_abs(*triple.cm), 1e-300});
  if (res > tol.residual_tol * scale) {
    std::ostringstream os;
    os << "engineer_covariant_target: input triple does not solve its Lyapunov equation (residual "
       << res << ")";
    throw InvalidInput(os.str());
  }
  const auto moved =
      transform_triple(triple, CovarianceTransform::make(s.inverse(), tol), tol);
  EngineeredReservoir out;
  out.gamma = moved.gamma;
  out.diffusion = moved.diffusion;
  out.target = *moved.cm;
  finish_reservoir(out, tol);
  return out;
}

LyapunovTriple beta_reservoir(const Eigen::Ref<const Matrix>& lambda, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("beta_reservoir: beta must be positive");
  mode_count(lambda);
  const auto dim = lambda.rows();
  return {-beta * Matrix::Identity(dim, dim), 2.0 * beta * symmetrized(lambda), Matrix(lambda)};
}

Matrix two_mode_squeezer(double r) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Matrix m = Matrix::Zero(4, 4);
  m.topLeftCorner(2, 2) << c, s, s, c;
  m.bottomRightCorner(2, 2) << c, -s, -s, c;
  return m;
}

Matrix opo_purifier(double eps2, double kappa) {
  if (!(kappa > 0.0) || !(std::abs(eps2) < kappa)) {
    throw InvalidInput("opo_purifier: need kappa > 0 and |eps2| < kappa");
  }
  const double e = std::sqrt((kappa + eps2) / (kappa - eps2));
  Matrix m = Matrix::Zero(4, 4);
  m.topLeftCorner(2, 2) << (1 + e) / 2, (1 - e) / 2, (1 - e) / 2, (1 + e) / 2;
  m.bottomRightCorner(2, 2) << (1 + e) / (2 * e), (e - 1) / (2 * e), (e - 1) / (2 * e),
      (1 + e) / (2 * e);
  return m;
}

}  // namespace gsteady
