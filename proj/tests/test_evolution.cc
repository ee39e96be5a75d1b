#include <doctest.h>

#include "gsteady/catalog.h"
#include "gsteady/errors.h"
#include "gsteady/evolution.h"
#include "gsteady/lyapunov.h"

using namespace gsteady;

TEST_SUITE("evolution") {

TEST_CASE("default step") {
  CHECK(default_time_step(Matrix::Zero(2, 2)) == 1e-3);
  CHECK(default_time_step(Matrix(-200.0 * Matrix::Identity(2, 2))) == doctest::Approx(0.05 / 200));
}

TEST_CASE("pure loss relaxes exponentially") {
  const auto dyn = build_dynamics(QuadraticHamiltonian::zero(1), std::vector{annihilation(1, 0, 1.0)});
  const Vector x0 = (Vector(2) << 1.0, -2.0).finished();
  const Matrix v0 = 5.0 * Matrix::Identity(2, 2);
  const auto traj = evolve(dyn, x0, v0, 2.0, 0.01, 11);
  REQUIRE(traj.times.size() == 11);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(2.0));
  const double decay = std::exp(-1.0);
  CHECK((traj.means.back() - decay * x0).cwiseAbs().maxCoeff() < 1e-9);
  // V(t) = 1 + (V0 - 1) e^{-t}
  CHECK(std::abs(traj.cms.back()(0, 0) - (1.0 + 4.0 * std::exp(-2.0))) < 1e-9);
}

TEST_CASE("terminal covariance approaches the steady state") {
  const auto dyn = build_dynamics(catalog_build(CatalogId::CascadedOPO));
  const double t_end = 40.0 / std::abs(stability_check(dyn).spectral_abscissa);
  const auto traj = evolve(dyn, Vector::Zero(4), Matrix::Identity(4, 4), t_end);
  CHECK(max_abs(traj.cms.back() - steady_state(dyn)) < 1e-6);
  CHECK(traj.times.size() <= 1001);
}

TEST_CASE("blow-up is reported") {
  QuadraticHamiltonian h = QuadraticHamiltonian::zero(1);
  const auto stable = build_dynamics(h, std::vector{annihilation(1, 0, 1.0)});
  GaussianDynamics dyn = stable;
  dyn.gamma = 300.0 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(evolve(dyn, Vector::Ones(2), Matrix::Identity(2, 2), 10.0, 1e-3), SolverError);
}

TEST_CASE("bad arguments") {
  const auto dyn = build_dynamics(QuadraticHamiltonian::zero(1), std::vector{annihilation(1, 0, 1.0)});
  CHECK_THROWS_AS(evolve(dyn, Vector::Zero(4), Matrix::Identity(2, 2), 1.0), InvalidInput);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve(dyn, Vector::Zero(2), asym, 1.0), InvalidInput);
  CHECK_THROWS_AS(evolve(dyn, Vector::Zero(2), Matrix::Identity(2, 2), -1.0), InvalidInput);
}

}
