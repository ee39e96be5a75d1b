#pragma once

// Fixed-step RK4 integration of the first and second moments.

#include <vector>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> means;
  std::vector<Matrix> cms;
};

/// min(1e-3, 0.05 / ||Gamma||_inf)
double default_time_step(const Eigen::Ref<const Matrix>& gamma);

/// Integrates dx/dt = (xi - eta) + Gamma x and dV/dt = Gamma V + V Gamma^T + D
/// from t = 0 to t_end. dt <= 0 picks default_time_step. At most max_samples
/// evenly strided samples are kept; the first and final states always are.
/// Throws SolverError naming the step index if a value stops being finite.
Trajectory evolve(const GaussianDynamics& dyn, const Eigen::Ref<const Vector>& x0,
                  const Eigen::Ref<const Matrix>& v0, double t_end, double dt = 0.0,
                  int max_samples = 1001);

}  // namespace gsteady
