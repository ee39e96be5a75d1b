#include <doctest.h>

#include "gsteady/catalog.h"
#include "gsteady/criteria.h"
#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"

using namespace gsteady;

TEST_SUITE("catalog") {

TEST_CASE("every catalog model is stable at its defaults") {
  for (CatalogId id : all_catalog_ids()) {
    CAPTURE(to_string(id));
    CHECK(parse_catalog_id(to_string(id)) == id);
    const auto dyn = build_dynamics(catalog_build(id));
    CHECK(stability_check(dyn).asymptotically_stable);
    const Matrix v = steady_state(dyn);
    CHECK(state_criterion(v, CriterionKind::uncertainty()).verdict != Verdict::Violated);
  }
  CHECK_THROWS_AS(parse_catalog_id("nope"), InvalidInput);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(resolve_params(CatalogId::OPO, {{"epsilon", 0.1}}), InvalidInput);
  CHECK_THROWS_AS(resolve_params(CatalogId::TwoOscThermal, {{"nbar1", -0.1}}), InvalidInput);
  CHECK_THROWS_AS(resolve_params(CatalogId::OPO, {{"kappa", 0.0}}), InvalidInput);
  CHECK_THROWS_AS(resolve_params(CatalogId::OPO, {{"eps", std::nan("")}}), InvalidInput);
  const auto p = resolve_params(CatalogId::OPO, {{"eps", 0.25}});
  CHECK(p.at("eps") == 0.25);
  CHECK(p.at("kappa") == 1.0);
}

TEST_CASE("single OPO closed form") {
  for (double e : {0.0, 0.3, -0.6}) {
    const CatalogParams p = {{"eps", e}, {"kappa", 1.3}};
    const Matrix v = steady_state(build_dynamics(catalog_build(CatalogId::OPO, p)));
    const Matrix expected = std::get<Matrix>(catalog_analytic(CatalogId::OPO, "steady_cm", p));
    CHECK(max_abs(v - expected) < 1e-12);
  }
}

TEST_CASE("RWA closed form") {
  const CatalogParams p = {{"zeta1", 0.4}, {"zeta2", 0.9}, {"Omega", 0.7}, {"nbar1", 0.2}, {"nbar2", 1.4}};
  const Matrix v = steady_state(build_dynamics(catalog_build(CatalogId::TwoOscRWA, p)));
  const Matrix expected = std::get<Matrix>(catalog_analytic(CatalogId::TwoOscRWA, "steady_cm", p));
  CHECK(max_abs(v - expected) < 1e-10);
}

TEST_CASE("cascaded OPO closed form") {
  const CatalogParams p = {{"eps1", 0.2}, {"eps2", 0.45}, {"kappa", 1.1}};
  const Matrix v = steady_state(build_dynamics(catalog_build(CatalogId::CascadedOPO, p)));
  const Matrix expected = std::get<Matrix>(catalog_analytic(CatalogId::CascadedOPO, "steady_cm", p));
  CHECK(max_abs(v - expected) < 1e-10);
}

TEST_CASE("thermal two-oscillator closed forms") {
  const CatalogParams p = {{"nbar1", 0.8}, {"nbar2", 0.8}, {"zeta1", 0.37}, {"zeta2", 0.37}};
  const Matrix v = steady_state(build_dynamics(catalog_build(CatalogId::TwoOscThermal, p)));
  const Matrix derived = std::get<Matrix>(catalog_analytic(CatalogId::TwoOscThermal, "steady_cm_derived", p));
  CHECK(max_abs(v - derived) < 1e-10);
  CHECK_THROWS_AS(catalog_analytic(CatalogId::TwoOscThermal, "steady_cm", {{"nbar1", 0.1}}), InvalidInput);
  CHECK(std::isinf(std::get<double>(catalog_analytic(CatalogId::TwoOscThermal, "separability_threshold",
                                                     {{"nbar1", 0.0}}))));
}

TEST_CASE("TMTSS model reaches its target") {
  const CatalogParams p = {{"r", 0.7}, {"nbar", 0.4}};
  const Matrix v = steady_state(build_dynamics(catalog_build(CatalogId::TMTSS, p)));
  const Matrix target = std::get<Matrix>(catalog_analytic(CatalogId::TMTSS, "target_cm", p));
  CHECK(max_abs(v - target) < 1e-9 * max_abs(target));
}

TEST_CASE("unknown quantities are refused") {
  for (CatalogId id : all_catalog_ids()) {
    CHECK_THROWS_AS(catalog_analytic(id, "bogus"), InvalidInput);
    CHECK_FALSE(catalog_quantities(id).empty());
    CHECK_FALSE(catalog_parameters(id).empty());
  }
}

}
