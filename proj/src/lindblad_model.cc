#include "gsteady/lindblad_model.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "gsteady/errors.h"

namespace gsteady {

QuadraticHamiltonian QuadraticHamiltonian::zero(int n) {
  if (n < 1) throw InvalidInput("mode count must be >= 1");
  return {Matrix::Zero(2 * n, 2 * n), Vector::Zero(2 * n), 0.0};
}

LindbladVector lindblad_from_quadratures(const CVector& q_coeff, const CVector& p_coeff,
                                         Complex mu) {
  if (q_coeff.size() != p_coeff.size() || q_coeff.size() == 0) {
    throw InvalidInput("lindblad_from_quadratures: coefficient sizes differ or are empty");
  }
  // lambda.Jx = sum_k lambda_q,k p_k - lambda_p,k q_k
  const auto n = q_coeff.size();
  CVector lambda(2 * n);
  lambda.head(n) = p_coeff;
  lambda.tail(n) = -q_coeff;
  return {lambda, mu};
}

namespace {

LindbladVector ladder(int n, int mode, double rate, double p_sign) {
  if (mode < 0 || mode >= n) throw InvalidInput("ladder operator: mode index out of range");
  if (!(rate >= 0.0)) throw InvalidInput("ladder operator: rate must be non-negative");
  const double c = std::sqrt(rate / 2.0);
  CVector q = CVector::Zero(n);
  CVector p = CVector::Zero(n);
  q(mode) = c;
  p(mode) = Complex(0.0, p_sign * c);
  return lindblad_from_quadratures(q, p);
}

}  // namespace

LindbladVector annihilation(int n, int mode, double rate) { return ladder(n, mode, rate, 1.0); }
LindbladVector creation(int n, int mode, double rate) { return ladder(n, mode, rate, -1.0); }

GaussianDynamics build_dynamics(const QuadraticHamiltonian& ham,
                                std::span<const LindbladVector> lindblad,
                                const Tolerances& tol) {
  const int n = mode_count(ham.hessian);
  const int dim = 2 * n;
  Vector xi = ham.xi.size() == 0 ? Vector::Zero(dim) : ham.xi;
  if (xi.size() != dim) throw InvalidInput("build_dynamics: xi has the wrong dimension");
  const double asym = max_abs(ham.hessian - ham.hessian.transpose());
  if (asym > tol.residual_tol * std::max(1.0, max_abs(ham.hessian))) {
    std::ostringstream os;
    os << "build_dynamics: Hessian is not symmetric (||H - H^T||_max = " << asym << ")";
    throw InvalidInput(os.str());
  }

  CMatrix upsilon = CMatrix::Zero(dim, dim);
  Vector eta = Vector::Zero(dim);
  for (const auto& l : lindblad) {
    if (l.lambda.size() != dim) {
      throw InvalidInput("build_dynamics: Lindblad vector has the wrong dimension");
    }
    upsilon += l.lambda * l.lambda.adjoint();
    eta += (std::conj(l.mu) * l.lambda).imag();
  }
  upsilon = hermitized(upsilon);
  const Matrix im_upsilon = 0.5 * (upsilon.imag() - upsilon.imag().transpose());
  upsilon.imag() = im_upsilon;

  const Matrix j = symplectic_form(n);
  GaussianDynamics dyn;
  dyn.gamma = j * symmetrized(ham.hessian) - im_upsilon * j;
  dyn.diffusion = symmetrized(2.0 * upsilon.real());
  dyn.upsilon = upsilon;
  dyn.eta = eta;
  dyn.drift = xi - eta;

  if (!lindblad.empty() && psd_verdict(upsilon, tol) == Definiteness::Indefinite) {
    throw SolverError("build_dynamics: accumulated Upsilon lost positive semidefiniteness");
  }
  return dyn;
}

GaussianDynamics build_dynamics(const ModelSpec& model, const Tolerances& tol) {
  return build_dynamics(model.hamiltonian, model.lindblad, tol);
}

StabilityReport stability_check(const Eigen::Ref<const Matrix>& gamma, const Tolerances& tol) {
  mode_count(gamma);
  StabilityReport r;
  r.spectrum = sorted_spectrum(gamma);
  r.spectral_abscissa = r.spectrum.back().real();
  r.asymptotically_stable = r.spectral_abscissa < -tol.stability_margin;
  r.marginal = std::abs(r.spectral_abscissa) <= tol.stability_margin;
  return r;
}

void require_stable(const Eigen::Ref<const Matrix>& gamma, const Tolerances& tol) {
  const auto r = stability_check(gamma, tol);
  if (r.asymptotically_stable) return;
  std::ostringstream os;
  os.precision(17);
  os << (r.marginal ? "drift matrix is marginally stable" : "drift matrix is not asymptotically stable")
     << " (spectral abscissa " << r.spectral_abscissa << ")";
  throw StabilityError(os.str(), r.spectral_abscissa);
}

Vector mean_fixed_point(const GaussianDynamics& dyn, const Tolerances& tol) {
  require_stable(dyn.gamma, tol);
  Eigen::PartialPivLU<Matrix> lu(dyn.gamma);
  Vector x = lu.solve(-dyn.drift);
  const double residual = max_abs(dyn.drift + dyn.gamma * x);
  if (residual > tol.residual_tol * std::max(1.0, max_abs(dyn.drift))) {
    throw SolverError("mean_fixed_point: residual check failed");
  }
  return x;
}

LindbladRealization realize_lindblad(const Eigen::Ref<const Matrix>& gamma,
                                     const Eigen::Ref<const Matrix>& diffusion,
                                     const Tolerances& tol) {
  const int n = mode_count(gamma);
  if (diffusion.rows() != gamma.rows() || diffusion.cols() != gamma.cols()) {
    throw InvalidInput("realize_lindblad: Gamma and D dimensions differ");
  }
  const Matrix j = symplectic_form(n);
  const Matrix gj = gamma * j.transpose();
  const Matrix sym = symmetrized(gj);
  const Matrix anti = 0.5 * (gj - gj.transpose());

  LindbladRealization out;
  out.hessian = symmetrized(-j * sym * j);
  out.upsilon = CMatrix(2 * n, 2 * n);
  out.upsilon.real() = 0.5 * symmetrized(diffusion);
  out.upsilon.imag() = -anti;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(out.upsilon);
  if (es.info() != Eigen::Success) throw SolverError("realize_lindblad: eigensolver failed");
  const Vector& nu = es.eigenvalues();
  const double band = tol.eig_zero_band * std::max(1.0, max_abs(nu));
  if (nu(0) < -band) {
    std::ostringstream os;
    os.precision(17);
    os << "not realizable as a Lindblad dissipator: Upsilon has eigenvalue " << nu(0);
    throw RealizabilityError(os.str(), nu(0));
  }
  for (Eigen::Index k = nu.size() - 1; k >= 0; --k) {
    if (nu(k) > band) out.lambdas.push_back(std::sqrt(nu(k)) * es.eigenvectors().col(k));
  }
  return out;
}

ModelSpec to_model(const LindbladRealization& realization) {
  ModelSpec m;
  const auto dim = realization.hessian.rows();
  m.hamiltonian = {realization.hessian, Vector::Zero(dim), 0.0};
  for (const auto& l : realization.lambdas) m.lindblad.push_back({l, Complex{}});
  return m;
}

}  // namespace gsteady
