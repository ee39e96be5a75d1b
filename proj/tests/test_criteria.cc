#include <doctest.h>

#include <random>

#include "gsteady/catalog.h"
#include "gsteady/criteria.h"
#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"
#include "gsteady/williamson.h"
#include "test_util.h"

using namespace gsteady;

namespace {

Matrix tmsv(double r, double nbar = 0.0) {
  const Matrix s = two_mode_squeezer(r);
  return (2 * nbar + 1) * s * s.transpose();
}

GaussianDynamics thermal_damping(int n, double z, double nbar) {
  std::vector<LindbladVector> ls;
  for (int k = 0; k < n; ++k) {
    ls.push_back(annihilation(n, k, z * (nbar + 1)));
    ls.push_back(creation(n, k, z * nbar));
  }
  return build_dynamics(QuadraticHamiltonian::zero(n), ls);
}

}  // namespace

TEST_SUITE("criteria") {

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition(2, {}), InvalidInput);
  CHECK_THROWS_AS(Partition(2, {0, 1}), InvalidInput);
  CHECK_THROWS_AS(Partition(3, {3}), InvalidInput);
  CHECK_THROWS_AS(Partition(1, {0}), InvalidInput);
  const Partition p(4, {3, 1, 1});
  CHECK(p.part_two() == std::vector<int>{1, 3});
  CHECK(p.part_one() == std::vector<int>{0, 2});
  CHECK(Partition::last_mode(3).part_two() == std::vector<int>{2});
}

TEST_CASE("criterion names use one-based modes") {
  const Partition p(3, {2});
  CHECK(CriterionKind::separability(p).name() == "separability[1,2|3]");
  CHECK(CriterionKind::steerability(p, Part::One).name() == "steerability[3->1,2]");
  CHECK(CriterionKind::steerability(p, Part::Two).name() == "steerability[1,2->3]");
}

TEST_CASE("xi matrices") {
  const Partition p = Partition::last_mode(2);
  const CMatrix ij = Complex(0, 1) * symplectic_form(2).cast<Complex>();
  CHECK(max_abs(xi_matrix(CriterionKind::uncertainty(), 2) - ij) == 0.0);
  CHECK(max_abs(xi_matrix(CriterionKind::classicality(), 2) + CMatrix::Identity(4, 4)) == 0.0);
  const Matrix t = time_inversion(p);
  CHECK(max_abs(xi_matrix(CriterionKind::separability(p), 2) - t.cast<Complex>() * ij * t.cast<Complex>()) == 0.0);
  // Steering of part one keeps only the commutators of mode one.
  const CMatrix pi1 = xi_matrix(CriterionKind::steerability(p, Part::One), 2);
  CHECK(std::abs(pi1(0, 2) - Complex(0, 1)) == 0.0);
  CHECK(std::abs(pi1(1, 3)) == 0.0);
  const CMatrix pi2 = xi_matrix(CriterionKind::steerability(p, Part::Two), 2);
  CHECK(std::abs(pi2(1, 3) - Complex(0, 1)) == 0.0);
  CHECK(std::abs(pi2(0, 2)) == 0.0);
}

TEST_CASE("vacuum is physical and marginally classical") {
  const Matrix v = Matrix::Identity(2, 2);
  const auto u = state_criterion(v, CriterionKind::uncertainty());
  CHECK(u.verdict == Verdict::Marginal);
  CHECK(u.label == "physical (marginal)");
  const auto c = state_criterion(v, CriterionKind::classicality());
  CHECK(c.verdict == Verdict::Marginal);
  CHECK(c.inertia == InertiaIndex{0, 2, 0});
}

TEST_CASE("squeezed vacuum is unphysical below the uncertainty bound") {
  Matrix v = Matrix::Identity(2, 2);
  v(0, 0) = 0.5;
  const auto u = state_criterion(v, CriterionKind::uncertainty());
  CHECK(u.verdict == Verdict::Violated);
  CHECK(u.label == "unphysical");
  v(1, 1) = 2.0;
  CHECK(state_criterion(v, CriterionKind::uncertainty()).verdict == Verdict::Marginal);
  CHECK(state_criterion(v, CriterionKind::classicality()).label == "nonclassical");
}

TEST_CASE("two-mode squeezed vacuum is entangled and steerable both ways") {
  const Matrix v = tmsv(0.4);
  const Partition p = Partition::last_mode(2);
  CHECK(state_criterion(v, CriterionKind::separability(p)).label == "entangled");
  const auto [s1, s2] = steerability_both_parts(v, p);
  CHECK(s1.label == "steerable");
  CHECK(s2.label == "steerable");
  CHECK(s1.conclusiveness == Conclusiveness::IffCondition);
}

TEST_CASE("thermal two-mode squeezed state entanglement threshold") {
  const double nbar = 0.5;
  const Partition p = Partition::last_mode(2);
  // Entangled iff e^{-2r}(2n+1) < 1.
  const double flip = 0.5 * std::log(2 * nbar + 1);
  CHECK(state_criterion(tmsv(0.9 * flip, nbar), CriterionKind::separability(p)).verdict == Verdict::Holds);
  CHECK(state_criterion(tmsv(1.1 * flip, nbar), CriterionKind::separability(p)).verdict == Verdict::Violated);
}

TEST_CASE("partial transposition is symmetric between the parts") {
  const Matrix v = tmsv(0.3, 0.2);
  const auto a = state_criterion(v, CriterionKind::separability(Partition(2, {1})));
  const auto b = state_criterion(v, CriterionKind::separability(Partition(2, {0})));
  CHECK((a.spectrum - b.spectrum).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("PPT label for multi-mode on both sides") {
  const Matrix v = 3.0 * Matrix::Identity(8, 8);
  const auto r = state_criterion(v, CriterionKind::separability(Partition(4, {2, 3})));
  CHECK(r.label == "PPT (separable or bound entangled)");
  const auto one_vs_rest = state_criterion(Matrix(3.0 * Matrix::Identity(6, 6)),
                                           CriterionKind::separability(Partition(3, {2})));
  CHECK(one_vs_rest.label == "separable");
}

TEST_CASE("environment level with symmetric drift is an iff test") {
  const auto dyn = thermal_damping(2, 0.7, 0.4);
  REQUIRE(is_symmetric(dyn.gamma, {}));
  const Partition p = Partition::last_mode(2);
  for (const auto& kind : {CriterionKind::classicality(), CriterionKind::separability(p),
                           CriterionKind::steerability(p, Part::One)}) {
    const auto env = environment_criterion(dyn, kind);
    CHECK(env.conclusiveness == Conclusiveness::IffCondition);
    CHECK(env.verdict == Verdict::Holds);
  }
}

TEST_CASE("environment level with non-symmetric drift is sufficient only") {
  const auto dyn = build_dynamics(catalog_build(CatalogId::TwoOscThermal, {{"nbar1", 0.05}, {"nbar2", 0.05}}));
  REQUIRE_FALSE(is_symmetric(dyn.gamma, {}));
  const auto env = environment_criterion(dyn, CriterionKind::classicality());
  CHECK(env.conclusiveness == Conclusiveness::SufficientOnly);
  if (env.verdict == Verdict::Violated) {
    CHECK(env.label == "inconclusive");
    CHECK(env.inconclusive());
  }
}

TEST_CASE("environment uncertainty matrix is twice conj(Upsilon)") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto dyn = build_dynamics(testing::random_model(rng, 1 + trial % 3));
    if (!stability_check(dyn).asymptotically_stable) continue;
    const auto r = environment_criterion(dyn, CriterionKind::uncertainty());
    CHECK(max_abs(r.tested_matrix - 2.0 * dyn.upsilon.conjugate()) < 1e-12 * std::max(1.0, max_abs(dyn.upsilon)));
    CHECK(r.verdict != Verdict::Violated);
    CHECK(r.conclusiveness == Conclusiveness::IffCondition);
  }
}

TEST_CASE("environment criteria refuse unstable drift") {
  QuadraticHamiltonian h = QuadraticHamiltonian::zero(1);
  h.hessian = Matrix::Identity(2, 2);
  const auto dyn = build_dynamics(h, std::vector<LindbladVector>{});
  CHECK_THROWS_AS(environment_criterion(dyn, CriterionKind::classicality()), StabilityError);
}

TEST_CASE("partition size must match the matrix") {
  CHECK_THROWS_AS(state_criterion(Matrix::Identity(6, 6), CriterionKind::separability(Partition(2, {1}))),
                  InvalidInput);
}

}
