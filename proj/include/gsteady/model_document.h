#pragma once

// JSON model input. Three shapes are accepted:
//
//   {"catalog": "opo", "params": {"eps": 0.3}}
//   {"n": 1, "hessian": [[..]], "xi": [..], "h0": 0,
//    "lindblad": [{"lambda_re": [..], "lambda_im": [..], "mu_re": 0, "mu_im": 0}]}
//   {"cm": [[..]]}
//
// each optionally with "tolerances": {"eig_zero_band", "stability_margin", "residual_tol"}.

#include <optional>
#include <string>

#include "gsteady/catalog.h"
#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

struct ModelDocument {
  std::optional<CatalogId> catalog;
  CatalogParams params;
  std::optional<ModelSpec> explicit_model;
  std::optional<Matrix> cm;
  Tolerances tolerances;

  bool has_model() const { return catalog.has_value() || explicit_model.has_value(); }
  /// Catalog or explicit model; throws InvalidInput for CM-only documents.
  ModelSpec model() const;
  /// Same document with some catalog parameters replaced.
  ModelDocument with_params(const CatalogParams& overrides) const;
};

/// Throws InvalidInput with a path-like hint on any schema violation.
ModelDocument parse_model_document(const std::string& text);
ModelDocument load_model_document(const std::string& path);

/// "a=1,b=2" -> {{"a",1},{"b",2}}
CatalogParams parse_param_list(const std::string& text);

}  // namespace gsteady
