#include "gsteady/evolution.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsteady/errors.h"

namespace gsteady {

double default_time_step(const Eigen::Ref<const Matrix>& gamma) {
  const double norm = gamma.cwiseAbs().rowwise().sum().maxCoeff();
  return norm > 0.0 ? std::min(1e-3, 0.05 / norm) : 1e-3;
}

Trajectory evolve(const GaussianDynamics& dyn, const Eigen::Ref<const Vector>& x0,
                  const Eigen::Ref<const Matrix>& v0, double t_end, double dt, int max_samples) {
  const int n = mode_count(dyn.gamma);
  if (x0.size() != 2 * n || v0.rows() != 2 * n || v0.cols() != 2 * n) {
    throw InvalidInput("evolve: initial state has the wrong dimension");
  }
  if (max_abs(v0 - v0.transpose()) > 1e-9 * std::max(1.0, max_abs(v0))) {
    throw InvalidInput("evolve: initial CM is not symmetric");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("evolve: t_end must be >= 0");
  if (dt <= 0.0) dt = default_time_step(dyn.gamma);
  if (!std::isfinite(dt)) throw InvalidInput("evolve: dt must be finite");
  if (max_samples < 2) throw InvalidInput("evolve: need at least two samples");

  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;
  const long stride = std::max<long>(1, (steps + max_samples - 2) / (max_samples - 1));

  const Matrix& g = dyn.gamma;
  const Matrix& d = dyn.diffusion;
  const Vector drift = dyn.drift.size() == 2 * n ? dyn.drift : Vector::Zero(2 * n);
  auto fx = [&](const Vector& x) -> Vector { return drift + g * x; };
  auto fv = [&](const Matrix& v) -> Matrix { return g * v + v * g.transpose() + d; };

  Trajectory out;
  Vector x = x0;
  Matrix v = symmetrized(v0);
  out.times.push_back(0.0);
  out.means.push_back(x);
  out.cms.push_back(v);
  for (long s = 1; s <= steps; ++s) {
    const Vector k1 = fx(x);
    const Vector k2 = fx(x + 0.5 * h * k1);
    const Vector k3 = fx(x + 0.5 * h * k2);
    const Vector k4 = fx(x + h * k3);
    x += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);

    const Matrix m1 = fv(v);
    const Matrix m2 = fv(v + 0.5 * h * m1);
    const Matrix m3 = fv(v + 0.5 * h * m2);
    const Matrix m4 = fv(v + h * m3);
    v = symmetrized(v + (h / 6.0) * (m1 + 2 * m2 + 2 * m3 + m4));

    if (!x.allFinite() || !v.allFinite()) {
      std::ostringstream os;
      os << "evolve: non-finite value at step " << s << " (t = " << s * h << ")";
      throw SolverError(os.str());
    }
    if (s % stride == 0 || s == steps) {
      out.times.push_back(s * h);
      out.means.push_back(x);
      out.cms.push_back(v);
    }
  }
  return out;
}

}  // namespace gsteady
