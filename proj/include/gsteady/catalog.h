#pragma once

// Parametric example systems and their closed forms.

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

enum class CatalogId {
  TwoOscThermal,  // two_osc_thermal: spring-coupled oscillators, each with a thermal bath
  TwoOscRWA,      // two_osc_rwa: the same in rotating-wave form
  OPO,            // opo: single degenerate parametric oscillator
  CascadedOPO,    // cascaded_opo: two OPOs, the first driving the second
  OPOThermal,     // opo_thermal: phase-changed cascaded pair with thermal baths
  TMTSS,          // tmtss: two-mode thermal squeezed target
};

const char* to_string(CatalogId id);
/// Throws InvalidInput for unknown names.
CatalogId parse_catalog_id(const std::string& name);
const std::vector<CatalogId>& all_catalog_ids();

using CatalogParams = std::map<std::string, double>;

/// Parameter names with their default values, in a fixed order.
const std::vector<std::pair<std::string, double>>& catalog_parameters(CatalogId id);

/// Defaults overlaid with the given values. Unknown names, non-finite values
/// and out-of-range couplings or occupations are rejected.
CatalogParams resolve_params(CatalogId id, const CatalogParams& given = {});

/// Hamiltonian and Lindblad vectors. TMTSS goes through engineer_gibbs_target
/// with Gamma' = -(zeta/2) I and the recovered Lindblad realization.
ModelSpec catalog_build(CatalogId id, const CatalogParams& params = {});

using AnalyticValue = std::variant<double, Vector, Matrix>;

/// Closed-form quantities; see catalog_quantities(id) for the names.
AnalyticValue catalog_analytic(CatalogId id, const std::string& quantity,
                               const CatalogParams& params = {});
const std::vector<std::string>& catalog_quantities(CatalogId id);

}  // namespace gsteady
