#include <doctest.h>

#include <random>

#include "gsteady/catalog.h"
#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"
#include "gsteady/williamson.h"
#include "test_util.h"

using namespace gsteady;

TEST_SUITE("williamson") {

TEST_CASE("thermal state is already in normal form") {
  Matrix v = Matrix::Zero(4, 4);
  v.diagonal() << 3.0, 1.5, 3.0, 1.5;
  const auto wd = williamson_decompose(v);
  CHECK(wd.mu(0) == doctest::Approx(1.5));
  CHECK(wd.mu(1) == doctest::Approx(3.0));
  const Vector desc = symplectic_spectrum(v);
  CHECK(desc(0) == doctest::Approx(3.0));
  CHECK(desc(1) == doctest::Approx(1.5));
}

TEST_CASE("random positive matrices") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const Matrix m = testing::random_positive(rng, 2 * n, 0.1);
    const auto wd = williamson_decompose(m);
    const Matrix j = symplectic_form(n);
    const double scale = max_abs(m);
    CHECK(max_abs(wd.s * m * wd.s.transpose() - wd.lambda()) <= 1e-9 * scale);
    CHECK(max_abs(wd.s * j * wd.s.transpose() - j) <= 1e-9 * std::max(1.0, wd.s.squaredNorm()));
    CHECK(is_symplectic(wd.s));
    for (int k = 1; k < n; ++k) CHECK(wd.mu(k - 1) <= wd.mu(k));
  }
}

TEST_CASE("non-positive input is refused") {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(williamson_decompose(m), InvalidInput);
  CHECK_THROWS_AS(is_symplectic(Matrix::Identity(3, 3)), InvalidInput);
}

TEST_CASE("purity and symplecticity") {
  const Matrix s = two_mode_squeezer(0.8);
  CHECK(is_symplectic(s));
  CHECK(is_pure(Matrix(s * s.transpose())));
  CHECK_FALSE(is_pure(Matrix(2.0 * s * s.transpose())));
  CHECK_FALSE(is_symplectic(Matrix(2.0 * Matrix::Identity(4, 4))));
}

TEST_CASE("gibbs engineering reaches its target") {
  for (double r : {0.0, 0.3, 1.2}) {
    for (double alpha : {1.0, 2.5}) {
      const auto res = engineer_gibbs_target(two_mode_squeezer(r), alpha);
      CHECK(res.target_mismatch < 1e-8);
      CHECK(max_abs(res.steady_state - alpha * two_mode_squeezer(r) * two_mode_squeezer(r).transpose()) <
            1e-8 * max_abs(res.target));
      // The reservoir is realizable: rebuilding it gives the same pair.
      const auto again = build_dynamics(to_model(res.realization));
      CHECK(max_abs(again.gamma - res.gamma) < 1e-10 * std::max(1.0, max_abs(res.gamma)));
      CHECK(max_abs(again.diffusion - res.diffusion) < 1e-10 * std::max(1.0, max_abs(res.diffusion)));
    }
  }
}

TEST_CASE("gibbs engineering preconditions") {
  const Matrix s = two_mode_squeezer(0.5);
  CHECK_THROWS_AS(engineer_gibbs_target(s, 0.5), InvalidInput);
  CHECK_THROWS_AS(engineer_gibbs_target(Matrix(2.0 * Matrix::Identity(4, 4)), 1.5), InvalidInput);
  CHECK_THROWS_AS(engineer_gibbs_target(s, 1.5, Matrix::Identity(4, 4)), InvalidInput);
}

TEST_CASE("covariant engineering of a thermal normal form") {
  std::mt19937 rng(41);
  const Matrix m = testing::random_positive(rng, 4, 0.1);
  auto wd = williamson_decompose(m);
  // Scale up so the target is physical.
  const double k = 1.5 / wd.mu.minCoeff();
  const Matrix target = k * m;
  wd = williamson_decompose(target);
  const auto res = engineer_covariant_target(beta_reservoir(wd.lambda(), 0.5), wd.s);
  CHECK(max_abs(res.steady_state - target) <= 1e-8 * max_abs(target));
}

TEST_CASE("purifier of the cascaded parametric pair") {
  const double e2 = -0.35, kappa = 1.0;
  // Pure exactly when eps1 = -eps2.
  const auto dyn = build_dynamics(catalog_build(CatalogId::CascadedOPO, {{"eps1", -e2}, {"eps2", e2}}));
  const Matrix v = steady_state(dyn);
  CHECK(is_pure(v));
  const Matrix sp = opo_purifier(e2, kappa);
  CHECK(is_symplectic(sp));
  CHECK(max_abs(opo_purifier(-e2, kappa) - sp.inverse()) < 1e-12);
  // With this cascade orientation the pure CM is S S^T for the purifier of eps1.
  const Matrix s1 = opo_purifier(-e2, kappa);
  CHECK(max_abs(s1 * s1.transpose() - v) < 1e-10);
  const auto mixed = build_dynamics(catalog_build(CatalogId::CascadedOPO, {{"eps1", 0.1}, {"eps2", e2}}));
  CHECK_FALSE(is_pure(steady_state(mixed)));
  CHECK_THROWS_AS(opo_purifier(1.0, kappa), InvalidInput);
}

TEST_CASE("beta reservoir steady state is its Lambda") {
  Matrix lambda = Matrix::Zero(4, 4);
  lambda.diagonal() << 1.2, 2.0, 1.2, 2.0;
  const auto t = beta_reservoir(lambda, 0.7);
  CHECK(lyapunov_residual(t.gamma, lambda, t.diffusion) < 1e-14);
}

}
