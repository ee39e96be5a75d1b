#include "gsteady/numerics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gsteady/errors.h"

namespace gsteady {

void Tolerances::validate() const {
  for (double v : {eig_zero_band, stability_margin, residual_tol}) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw InvalidInput("tolerances must be finite and strictly positive");
    }
  }
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "positive_definite";
    case Definiteness::PositiveSemidefiniteMarginal:
      return "positive_semidefinite_marginal";
    case Definiteness::Indefinite:
      return "indefinite";
  }
  return "?";
}

Matrix symplectic_form(int n) {
  if (n < 1) throw InvalidInput("symplectic_form: mode count must be >= 1");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

int mode_count(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    std::ostringstream os;
    os << "expected a non-empty 2n x 2n matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidInput(os.str());
  }
  return static_cast<int>(m.rows() / 2);
}

double hermiticity_defect(const Eigen::Ref<const CMatrix>& m) {
  return max_abs(m - m.adjoint());
}

Vector hermitian_spectrum(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw InvalidInput("hermitian_spectrum: matrix is not square");
  if (m.size() == 0) return Vector();
  const double defect = hermiticity_defect(m);
  if (defect > tol.residual_tol * std::max(max_abs(m), 1e-300)) {
    std::ostringstream os;
    os << "matrix is not self-adjoint: ||M - M^dagger||_max = " << defect;
    throw InvalidInput(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitized(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("self-adjoint eigensolver failed");
  return es.eigenvalues();
}

Vector hermitian_spectrum(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw InvalidInput("hermitian_spectrum: matrix is not square");
  if (m.size() == 0) return Vector();
  const double defect = max_abs(m - m.transpose());
  if (defect > tol.residual_tol * std::max(max_abs(m), 1e-300)) {
    std::ostringstream os;
    os << "matrix is not symmetric: ||M - M^T||_max = " << defect;
    throw InvalidInput(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("self-adjoint eigensolver failed");
  return es.eigenvalues();
}

InertiaIndex inertia_of_spectrum(const Eigen::Ref<const Vector>& spectrum, const Tolerances& tol) {
  const double scale = std::max(1.0, max_abs(spectrum));
  const double band = tol.eig_zero_band * scale;
  InertiaIndex in;
  for (double nu : spectrum) {
    if (nu > band) {
      ++in.n_plus;
    } else if (nu < -band) {
      ++in.n_minus;
    } else {
      ++in.n_zero;
    }
  }
  return in;
}

InertiaIndex inertia(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol) {
  return inertia_of_spectrum(hermitian_spectrum(m, tol), tol);
}

InertiaIndex inertia(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  return inertia_of_spectrum(hermitian_spectrum(m, tol), tol);
}

Definiteness definiteness_of(const InertiaIndex& in) {
  if (in.n_minus > 0) return Definiteness::Indefinite;
  if (in.n_zero > 0) return Definiteness::PositiveSemidefiniteMarginal;
  return Definiteness::PositiveDefinite;
}

Definiteness psd_verdict(const Eigen::Ref<const CMatrix>& m, const Tolerances& tol) {
  return definiteness_of(inertia(m, tol));
}

Definiteness psd_verdict(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  return definiteness_of(inertia(m, tol));
}

std::vector<Complex> sorted_spectrum(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols()) throw InvalidInput("sorted_spectrum: matrix is not square");
  if (m.size() == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw SolverError("eigensolver failed");
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

double spectral_abscissa(const Eigen::Ref<const Matrix>& m) {
  const auto spec = sorted_spectrum(m);
  if (spec.empty()) throw InvalidInput("spectral_abscissa: empty matrix");
  return spec.back().real();
}

std::vector<int> interleaved_source(int n) {
  std::vector<int> src(2 * n);
  for (int k = 0; k < n; ++k) {
    src[2 * k] = k;
    src[2 * k + 1] = n + k;
  }
  return src;
}

Matrix reorder(const Eigen::Ref<const Matrix>& m, ModeOrdering from, Layout to) {
  if (from.n < 1 || m.rows() != 2 * from.n || m.cols() != 2 * from.n) {
    std::ostringstream os;
    os << "reorder: expected " << 2 * from.n << "x" << 2 * from.n << " matrix, got " << m.rows()
       << "x" << m.cols();
    throw InvalidInput(os.str());
  }
  if (from.layout == to) return m;
  const auto src = interleaved_source(from.n);
  const int dim = 2 * from.n;
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (to == Layout::InterleavedQP) {
        out(i, j) = m(src[i], src[j]);
      } else {
        out(src[i], src[j]) = m(i, j);
      }
    }
  }
  return out;
}

}  // namespace gsteady
