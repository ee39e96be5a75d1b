#include "gsteady/model_document.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gsteady/errors.h"

namespace gsteady {

namespace {

using nlohmann::json;

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidInput(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidInput(where + ": number is not finite");
  return v;
}

Vector vector_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix matrix_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InvalidInput(where + ": expected a non-empty array of rows");
  const auto rows = j.size();
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const Vector row = vector_of(j[r], where + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
    if (row.size() != m.cols()) throw InvalidInput(where + ": rows have different lengths");
    m.row(static_cast<Eigen::Index>(r)) = row;
  }
  return m;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InvalidInput(where + ": unknown field '" + it.key() + "'");
  }
}

Tolerances tolerances_of(const json& j) {
  if (!j.is_object()) throw InvalidInput("tolerances: expected an object");
  reject_unknown(j, {"eig_zero_band", "stability_margin", "residual_tol"}, "tolerances");
  Tolerances t;
  if (j.contains("eig_zero_band")) t.eig_zero_band = number(j["eig_zero_band"], "tolerances.eig_zero_band");
  if (j.contains("stability_margin")) t.stability_margin = number(j["stability_margin"], "tolerances.stability_margin");
  if (j.contains("residual_tol")) t.residual_tol = number(j["residual_tol"], "tolerances.residual_tol");
  t.validate();
  return t;
}

ModelSpec explicit_of(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1) {
    throw InvalidInput("n: expected a positive integer");
  }
  const int n = j["n"].get<int>();
  const int dim = 2 * n;
  if (!j.contains("hessian")) throw InvalidInput("hessian: missing");
  ModelSpec m;
  m.hamiltonian.hessian = matrix_of(j["hessian"], "hessian");
  if (m.hamiltonian.hessian.rows() != dim || m.hamiltonian.hessian.cols() != dim) {
    throw InvalidInput("hessian: expected a 2n x 2n matrix");
  }
  m.hamiltonian.xi = j.contains("xi") ? vector_of(j["xi"], "xi") : Vector::Zero(dim);
  if (m.hamiltonian.xi.size() != dim) throw InvalidInput("xi: expected 2n entries");
  m.hamiltonian.offset = j.contains("h0") ? number(j["h0"], "h0") : 0.0;
  if (j.contains("lindblad")) {
    const json& list = j["lindblad"];
    if (!list.is_array()) throw InvalidInput("lindblad: expected an array");
    for (size_t k = 0; k < list.size(); ++k) {
      const std::string where = "lindblad[" + std::to_string(k) + "]";
      const json& l = list[k];
      if (!l.is_object()) throw InvalidInput(where + ": expected an object");
      reject_unknown(l, {"lambda_re", "lambda_im", "mu_re", "mu_im"}, where);
      const Vector re = l.contains("lambda_re") ? vector_of(l["lambda_re"], where + ".lambda_re") : Vector::Zero(dim);
      const Vector im = l.contains("lambda_im") ? vector_of(l["lambda_im"], where + ".lambda_im") : Vector::Zero(dim);
      if (re.size() != dim || im.size() != dim) throw InvalidInput(where + ": lambda needs 2n entries");
      LindbladVector v;
      v.lambda = CVector(dim);
      v.lambda.real() = re;
      v.lambda.imag() = im;
      v.mu = Complex(l.contains("mu_re") ? number(l["mu_re"], where + ".mu_re") : 0.0,
                     l.contains("mu_im") ? number(l["mu_im"], where + ".mu_im") : 0.0);
      m.lindblad.push_back(v);
    }
  }
  return m;
}

}  // namespace

ModelSpec ModelDocument::model() const {
  if (catalog) return catalog_build(*catalog, params);
  if (explicit_model) return *explicit_model;
  throw InvalidInput("document holds only a covariance matrix, not a model");
}

ModelDocument ModelDocument::with_params(const CatalogParams& overrides) const {
  if (!catalog) throw InvalidInput("parameter overrides need a catalog model");
  ModelDocument d = *this;
  for (const auto& [k, v] : overrides) d.params[k] = v;
  d.params = resolve_params(*catalog, d.params);
  return d;
}

ModelDocument parse_model_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("document: expected a JSON object");
  ModelDocument doc;
  if (j.contains("tolerances")) doc.tolerances = tolerances_of(j["tolerances"]);
  const int shapes = int(j.contains("catalog")) + int(j.contains("hessian") || j.contains("n")) +
                     int(j.contains("cm"));
  if (shapes != 1) {
    throw InvalidInput("document: give exactly one of \"catalog\", an explicit model, or \"cm\"");
  }
  if (j.contains("catalog")) {
    reject_unknown(j, {"catalog", "params", "tolerances"}, "document");
    if (!j["catalog"].is_string()) throw InvalidInput("catalog: expected a string");
    doc.catalog = parse_catalog_id(j["catalog"].get<std::string>());
    CatalogParams given;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw InvalidInput("params: expected an object");
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
        given[it.key()] = number(it.value(), "params." + it.key());
      }
    }
    doc.params = resolve_params(*doc.catalog, given);
  } else if (j.contains("cm")) {
    reject_unknown(j, {"cm", "tolerances"}, "document");
    doc.cm = matrix_of(j["cm"], "cm");
    mode_count(*doc.cm);
  } else {
    reject_unknown(j, {"n", "hessian", "xi", "h0", "lindblad", "tolerances"}, "document");
    doc.explicit_model = explicit_of(j);
  }
  return doc;
}

ModelDocument load_model_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_document(ss.str());
}

CatalogParams parse_param_list(const std::string& text) {
  CatalogParams out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidInput("parameter '" + item + "': expected name=value");
    }
    const std::string value = item.substr(eq + 1);
    double v = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || end != value.data() + value.size() || value.empty() ||
        !std::isfinite(v)) {
      throw InvalidInput("parameter '" + item + "': value is not a finite number");
    }
    out[item.substr(0, eq)] = v;
  }
  return out;
}

}  // namespace gsteady
