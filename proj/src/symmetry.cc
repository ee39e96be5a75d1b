#include "gsteady/symmetry.h"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"

namespace gsteady {

namespace {

double rel_gap(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

bool near(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
          const Tolerances& tol) {
  return rel_gap(a, b) <= tol.residual_tol;
}

// Entries of m that must vanish or match, relative to the largest entry.
bool small(double x, double scale, const Tolerances& tol) {
  return std::abs(x) <= tol.residual_tol * std::max(scale, 1e-300);
}

}  // namespace

CovarianceTransform CovarianceTransform::make(const Eigen::Ref<const Matrix>& w,
                                              const Tolerances& tol) {
  const int n = mode_count(w);
  Eigen::FullPivLU<Matrix> lu(w);
  if (!lu.isInvertible()) throw InvalidInput("covariance transform: W is singular");
  CovarianceTransform t;
  t.w = w;
  const Matrix id = Matrix::Identity(2 * n, 2 * n);
  const Matrix j = symplectic_form(n);
  t.is_orthogonal = max_abs(w * w.transpose() - id) <= tol.residual_tol * std::max(1.0, max_abs(w));
  t.is_symplectic = max_abs(w * j * w.transpose() - j) <= tol.residual_tol * std::max(1.0, max_abs(w) * max_abs(w));
  return t;
}

LyapunovTriple transform_triple(const LyapunovTriple& t, const CovarianceTransform& w,
                                const Tolerances& tol) {
  if (t.gamma.rows() != w.w.rows() || t.diffusion.rows() != w.w.rows()) {
    throw InvalidInput("transform_triple: dimension mismatch");
  }
  const Matrix w_inv = w.w.inverse();
  LyapunovTriple out;
  out.gamma = w.w * t.gamma * w_inv;
  out.diffusion = symmetrized(w.w * t.diffusion * w.w.transpose());
  if (t.cm) {
    if (t.cm->rows() != w.w.rows()) throw InvalidInput("transform_triple: CM dimension mismatch");
    out.cm = symmetrized(w.w * *t.cm * w.w.transpose());
    const double before = lyapunov_residual(t.gamma, *t.cm, t.diffusion);
    const double scale_before = std::max(max_abs(t.diffusion), 1e-300);
    if (before <= tol.residual_tol * scale_before) {
      const double after = lyapunov_residual(out.gamma, *out.cm, out.diffusion);
      const double scale = std::max({max_abs(out.diffusion), max_abs(out.gamma) * max_abs(*out.cm), 1e-300});
      if (after > 1e3 * tol.residual_tol * scale) {
        std::ostringstream os;
        os << "transform_triple: transformed CM fails the transformed equation (residual " << after
           << ")";
        throw SolverError(os.str());
      }
    }
  }
  return out;
}

InvarianceReport invariance_check(const Eigen::Ref<const Matrix>& gamma,
                                  const Eigen::Ref<const Matrix>& diffusion,
                                  const CovarianceTransform& w, const Tolerances& tol) {
  const auto moved = transform_triple({gamma, diffusion, std::nullopt}, w, tol);
  InvarianceReport r;
  r.gamma_invariant = near(moved.gamma, gamma, tol);
  r.d_invariant = near(moved.diffusion, diffusion, tol);
  if (r.gamma_invariant && r.d_invariant && stability_check(gamma, tol).asymptotically_stable) {
    const Matrix v = solve_lyapunov(Matrix(gamma), Matrix(diffusion), tol);
    r.v_defect = rel_gap(w.w * v * w.w.transpose(), v);
    if (*r.v_defect > 1e3 * tol.residual_tol) {
      std::ostringstream os;
      os << "invariance_check: invariant triple gave a non-invariant CM (defect " << *r.v_defect
         << ")";
      throw SolverError(os.str());
    }
    r.implies_v_invariant = true;
  }
  return r;
}

const char* to_string(StructureTemplate s) {
  switch (s) {
    case StructureTemplate::BlockDiagonalQP:
      return "block_diagonal_qp";
    case StructureTemplate::SwapSymmetric:
      return "swap_symmetric";
    case StructureTemplate::JCommuting:
      return "j_commuting";
    case StructureTemplate::KnInvariant:
      return "kn_invariant";
    case StructureTemplate::LocalRotationInvariant:
      return "local_rotation_invariant";
  }
  return "?";
}

bool match_template(const Eigen::Ref<const Matrix>& m, StructureTemplate s,
                    const Tolerances& tol) {
  const int n = mode_count(m);
  const double scale = max_abs(m);
  const auto qq = m.topLeftCorner(n, n);
  const auto qp = m.topRightCorner(n, n);
  const auto pq = m.bottomLeftCorner(n, n);
  const auto pp = m.bottomRightCorner(n, n);
  auto zero = [&](const Matrix& x) { return small(max_abs(x), scale, tol); };
  switch (s) {
    case StructureTemplate::BlockDiagonalQP:
      return zero(qp) && zero(pq);
    case StructureTemplate::SwapSymmetric:
      return zero(qq - pp) && zero(qp - pq);
    case StructureTemplate::JCommuting:
      return zero(qq - pp) && zero(qp + pq);
    case StructureTemplate::KnInvariant: {
      const double m1 = m(0, 0);
      const double m2 = m(0, n);
      const Matrix expected = m1 * Matrix::Identity(2 * n, 2 * n) + m2 * symplectic_form(n);
      return zero(m - expected);
    }
    case StructureTemplate::LocalRotationInvariant: {
      if (!zero(qq - pp) || !zero(qp + pq)) return false;
      Matrix off_qq = qq;
      off_qq.diagonal().setZero();
      Matrix off_qp = qp;
      off_qp.diagonal().setZero();
      return zero(off_qq) && zero(off_qp);
    }
  }
  return false;
}

Matrix unitary_to_orthosymplectic(const Eigen::Ref<const CMatrix>& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw InvalidInput("unitary must be square");
  const CMatrix check = u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols());
  if (max_abs(check) > 1e-9) throw InvalidInput("matrix is not unitary");
  const auto n = u.rows();
  Matrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = u.real();
  r.bottomRightCorner(n, n) = u.real();
  r.topRightCorner(n, n) = u.imag();
  r.bottomLeftCorner(n, n) = -u.imag();
  return r;
}

Matrix local_rotation(const Eigen::Ref<const Vector>& angles) {
  const auto n = angles.size();
  CMatrix u = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) u(k, k) = std::polar(1.0, angles(k));
  return unitary_to_orthosymplectic(u);
}

std::optional<double> gibbs_condition(const Eigen::Ref<const Matrix>& gamma,
                                      const Eigen::Ref<const Matrix>& diffusion,
                                      const Tolerances& tol) {
  mode_count(gamma);
  if (diffusion.rows() != gamma.rows() || diffusion.cols() != gamma.cols()) {
    throw InvalidInput("gibbs_condition: dimension mismatch");
  }
  const Matrix sym = gamma + gamma.transpose();
  if (psd_verdict(Matrix(-sym), tol) == Definiteness::Indefinite) {
    throw InvalidInput("gibbs_condition: Gamma + Gamma^T is not negative semidefinite");
  }
  require_stable(gamma, tol);

  const double alpha = -0.5 * diffusion.trace() / gamma.trace();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) return std::nullopt;
  const double scale = std::max(max_abs(diffusion), max_abs(alpha * sym));
  if (max_abs(alpha * sym + diffusion) > tol.residual_tol * std::max(scale, 1e-300)) {
    return std::nullopt;
  }
  const Matrix v = solve_lyapunov(Matrix(gamma), symmetrized(diffusion), tol);
  const Matrix expected = alpha * Matrix::Identity(v.rows(), v.cols());
  if (max_abs(v - expected) > 1e3 * tol.residual_tol * alpha) {
    std::ostringstream os;
    os << "gibbs_condition: steady state deviates from alpha I by " << max_abs(v - expected);
    throw SolverError(os.str());
  }
  return alpha;
}

}  // namespace gsteady
