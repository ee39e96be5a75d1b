#include "gsteady/catalog.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsteady/errors.h"
#include "gsteady/williamson.h"

namespace gsteady {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Occupations below this make the threshold formulas divide by zero.
constexpr double kTinyOccupation = 1e-12;

struct Entry {
  CatalogId id;
  const char* name;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::string> quantities;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      {CatalogId::TwoOscThermal,
       "two_osc_thermal",
       {{"omega1", 0.5}, {"omega2", 0.5}, {"kappa", 1.0}, {"zeta1", 0.5}, {"zeta2", 0.5},
        {"nbar1", 0.5}, {"nbar2", 0.5}},
       {"steady_cm", "steady_cm_derived", "separability_threshold", "classicality_threshold",
        "classicality_threshold_iff", "separability_threshold_iff", "steering_threshold",
        "steering_threshold_derived", "classicality_spectrum", "separability_spectrum",
        "steering_spectrum", "steering_spectrum_derived"}},
      {CatalogId::TwoOscRWA,
       "two_osc_rwa",
       {{"varpi1", 1.0}, {"varpi2", 1.0}, {"Omega", 0.5}, {"zeta1", 0.5}, {"zeta2", 0.8},
        {"nbar1", 0.3}, {"nbar2", 1.0}},
       {"steady_cm", "cm_spectrum", "classicality_spectrum"}},
      {CatalogId::OPO, "opo", {{"eps", 0.5}, {"kappa", 1.0}}, {"steady_cm", "classicality_env_matrix"}},
      {CatalogId::CascadedOPO,
       "cascaded_opo",
       {{"eps1", 0.3}, {"eps2", -0.2}, {"kappa", 1.0}},
       {"steady_cm", "separability_spectrum", "steering_spectrum_1", "steering_spectrum_2"}},
      {CatalogId::OPOThermal,
       "opo_thermal",
       {{"eps", 0.2}, {"kappa", 0.5}, {"zeta", 1.0}, {"nbar", 0.2}},
       {"classicality_spectrum", "separability_spectrum", "steering_spectrum",
        "steering_spectrum_derived", "classicality_flip_nbar", "entanglement_flip_nbar",
        "steering_flip_nbar", "steering_flip_nbar_derived"}},
      {CatalogId::TMTSS,
       "tmtss",
       {{"r", 0.5}, {"nbar", 0.2}, {"zeta", 1.0}},
       {"target_cm", "entanglement_flip_r", "steering_flip_r", "entanglement_flip_r_derived",
        "steering_flip_r_derived"}},
  };
  return t;
}

const Entry& entry(CatalogId id) {
  for (const auto& e : table()) {
    if (e.id == id) return e;
  }
  throw InvalidInput("unknown catalog id");
}

double get(const CatalogParams& p, const char* name) { return p.at(name); }

Vector sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_equal(const CatalogParams& p, const char* a, const char* b, const std::string& what) {
  if (get(p, a) != get(p, b)) {
    throw InvalidInput(what + " needs " + a + " = " + b);
  }
}

void add_thermal_baths(ModelSpec& m, int n, const std::vector<double>& zeta,
                       const std::vector<double>& nbar) {
  for (int k = 0; k < n; ++k) {
    m.lindblad.push_back(annihilation(n, k, zeta[k] * (nbar[k] + 1.0)));
    m.lindblad.push_back(creation(n, k, zeta[k] * nbar[k]));
  }
}

// Hessian with only a q-p block: x.Hx/2 = q.Hqp p.
Matrix qp_hessian(const Matrix& hqp) {
  const auto n = hqp.rows();
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  h.topRightCorner(n, n) = hqp;
  h.bottomLeftCorner(n, n) = hqp.transpose();
  return h;
}

Matrix kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  }
  return out;
}

AnalyticValue two_osc_thermal(const std::string& q, const CatalogParams& p) {
  const double w = get(p, "omega1");
  const double kappa = get(p, "kappa");
  const double z = get(p, "zeta1");
  const double n1 = get(p, "nbar1");
  const double n2 = get(p, "nbar2");
  auto symmetric = [&] {
    require_equal(p, "omega1", "omega2", q);
    require_equal(p, "zeta1", "zeta2", q);
    require_equal(p, "nbar1", "nbar2", q);
  };
  if (q == "steady_cm" || q == "steady_cm_derived") {
    symmetric();
    const double c = (2 * n1 + 1) * kappa / (z * z + 4 * w * (w + kappa));
    Eigen::Matrix2d a, b;
    if (q == "steady_cm") {
      a << w, z / 2, z / 2, w + kappa;
      b << -1, 1, 1, -1;
    } else {
      a << -w, -z / 2, -z / 2, w + kappa;
      b << 1, -1, -1, 1;
    }
    return Matrix((2 * n1 + 1) * Matrix::Identity(4, 4) + c * kron2(a, b));
  }
  if (q == "separability_threshold") {
    if (n1 < kTinyOccupation || n2 < kTinyOccupation) return kInf;
    return std::sqrt((2 * n1 + 1) * (2 * n2 + 1) / (16 * n1 * n2 * (n1 + 1) * (n2 + 1)));
  }
  if (q == "classicality_threshold") {
    if (n1 < kTinyOccupation || n2 < kTinyOccupation) return kInf;
    return (n1 + n2) / (4 * n1 * n2);
  }
  if (q == "classicality_threshold_iff" || q == "separability_threshold_iff") {
    symmetric();
    if (n1 < kTinyOccupation) return kInf;
    const double lead = q == "classicality_threshold_iff"
                            ? 1.0 / (4 * n1 * n1)
                            : 1.0 / (16 * n1 * n1 * (n1 + 1) * (n1 + 1));
    const double rad = lead - std::pow(2 * w / kappa + 1, 2);
    // A negative radicand means the property holds for every zeta >= 0.
    return rad > 0 ? std::sqrt(rad) : 0.0;
  }
  if (q == "steering_threshold" || q == "steering_threshold_derived") {
    symmetric();
    const double s = std::pow(2 * n1 + 1, 2);
    if (q == "steering_threshold") return 1.0 / std::sqrt(4 * s + 4);
    if (n1 < kTinyOccupation) return kInf;
    return 1.0 / std::sqrt(4 * s - 4);
  }
  if (q == "classicality_spectrum") {
    require_equal(p, "zeta1", "zeta2", q);
    const double root = std::sqrt(kappa * kappa / 4 + z * z * (n1 - n2) * (n1 - n2));
    std::vector<double> v;
    for (double s1 : {-1.0, 1.0}) {
      for (double s2 : {-1.0, 1.0}) v.push_back(z * (n1 + n2) + s1 * kappa / 2 + s2 * root);
    }
    return sorted(v);
  }
  if (q == "separability_spectrum") {
    require_equal(p, "zeta1", "zeta2", q);
    const double d = n1 - n2;
    const double inner = std::sqrt(std::pow(kappa, 4) / 4 + z * z * kappa * kappa + 4 * std::pow(z, 4) * d * d);
    std::vector<double> v;
    for (double s2 : {-1.0, 1.0}) {
      const double outer = std::sqrt(kappa * kappa / 2 + z * z * d * d + z * z + s2 * inner);
      for (double s1 : {-1.0, 1.0}) v.push_back(z * (n1 + n2 + 1) + s1 * outer);
    }
    return sorted(v);
  }
  if (q == "steering_spectrum") {
    symmetric();
    const double root = std::sqrt(4 * z * z + kappa * kappa);
    return sorted({2 * n1 + 1, z * (2 * n1 + 1) - root, z * (2 * n1 + 1) + root});
  }
  if (q == "steering_spectrum_derived") {
    symmetric();
    const double root = 0.5 * std::sqrt(4 * z * z + kappa * kappa);
    const double c = z * (2 * n1 + 1);
    return sorted({c, c, c - root, c + root});
  }
  throw InvalidInput("unknown quantity '" + q + "' for two_osc_thermal");
}

AnalyticValue two_osc_rwa(const std::string& q, const CatalogParams& p) {
  const double z1 = get(p, "zeta1");
  const double z2 = get(p, "zeta2");
  const double om = get(p, "Omega");
  const double n1 = get(p, "nbar1");
  const double n2 = get(p, "nbar2");
  if (q == "steady_cm") {
    const double zs = z1 + z2;
    const double den = zs * (4 * om * om + z1 * z2);
    const double mean = 2 * (z1 * n1 + z2 * n2) / zs;
    const double v1 = mean + 2 * (n1 - n2) * z1 * z2 * z2 / den + 1;
    const double v2 = mean + 2 * (n2 - n1) * z1 * z1 * z2 / den + 1;
    const double v14 = 4 * z1 * z2 * om * (n2 - n1) / den;
    Matrix v(4, 4);
    v << v1, 0, 0, v14,
         0, v2, -v14, 0,
         0, -v14, v1, 0,
         v14, 0, 0, v2;
    return v;
  }
  if (q == "cm_spectrum") {
    require_equal(p, "zeta1", "zeta2", q);
    const double s = (n1 - n2) / std::sqrt(1 + 4 * om * om / (z1 * z1));
    const double c = n1 + n2 + 1;
    return sorted({c - s, c - s, c + s, c + s});
  }
  if (q == "classicality_spectrum") {
    require_equal(p, "zeta1", "zeta2", q);
    return sorted({2 * z1 * n1, 2 * z1 * n1, 2 * z1 * n2, 2 * z1 * n2});
  }
  throw InvalidInput("unknown quantity '" + q + "' for two_osc_rwa");
}

AnalyticValue opo(const std::string& q, const CatalogParams& p) {
  const double e = get(p, "eps");
  const double k = get(p, "kappa");
  if (q == "steady_cm") {
    Matrix v = Matrix::Zero(2, 2);
    v(0, 0) = k / (k - e);
    v(1, 1) = k / (k + e);
    return v;
  }
  if (q == "classicality_env_matrix") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = e;
    m(1, 1) = -e;
    return m;
  }
  throw InvalidInput("unknown quantity '" + q + "' for opo");
}

AnalyticValue cascaded_opo(const std::string& q, const CatalogParams& p) {
  const double e1 = get(p, "eps1");
  const double e2 = get(p, "eps2");
  const double k = get(p, "kappa");
  if (q == "steady_cm") {
    const double gp = (e1 + e2 + 2 * k) * (e1 + k);
    const double gm = (e1 + e2 - 2 * k) * (e1 - k);
    const double hp = (e1 * e1 + e1 * e2 + e1 * k + 2 * k * k - k * e2) / (e2 - k);
    const double hm = (e1 * e1 + e1 * e2 - e1 * k + 2 * k * k + k * e2) / (e2 + k);
    Matrix v = Matrix::Zero(4, 4);
    v.topLeftCorner(2, 2) << k / (k - e1), -2 * k * e1 / gm, -2 * k * e1 / gm, -k * hp / gm;
    v.bottomRightCorner(2, 2) << k / (k + e1), 2 * k * e1 / gp, 2 * k * e1 / gp, k * hm / gp;
    return v;
  }
  const double r5 = std::sqrt(5.0);
  if (q == "separability_spectrum") return sorted({(1 - r5) * k, (1 + r5) * k, 2 * k, 0.0});
  if (q == "steering_spectrum_1") {
    return sorted({(1 - r5) * k / 2, (1 + r5) * k / 2, (3 - r5) * k / 2, (3 + r5) * k / 2});
  }
  if (q == "steering_spectrum_2") {
    const double r17 = std::sqrt(17.0);
    return sorted({(3 - r17) * k / 2, (3 + r17) * k / 2, k, 0.0});
  }
  throw InvalidInput("unknown quantity '" + q + "' for cascaded_opo");
}

AnalyticValue opo_thermal(const std::string& q, const CatalogParams& p) {
  const double e = get(p, "eps");
  const double k = get(p, "kappa");
  const double z = get(p, "zeta");
  const double n = get(p, "nbar");
  const double r = std::sqrt(z * z + k * k);
  if (q == "classicality_spectrum") {
    return sorted({2 * z * n - (e + k), 2 * z * n + (e + k), 2 * z * n - (e - k), 2 * z * n + (e - k)});
  }
  if (q == "separability_spectrum") {
    return sorted({2 * z * n - k, 2 * z * n + k, 2 * z * (n + 1) - k, 2 * z * (n + 1) + k});
  }
  if (q == "steering_spectrum" || q == "steering_spectrum_derived") {
    const double half = q == "steering_spectrum" ? r : 0.5 * r;
    const double a = (2 * n + 0.5) * z;
    const double b = (2 * n + 1.5) * z;
    return sorted({a - half, a + half, b - half, b + half});
  }
  if (q == "classicality_flip_nbar") return (e + k) / (2 * z);
  if (q == "entanglement_flip_nbar") return k / (2 * z);
  if (q == "steering_flip_nbar") return (r / z - 0.5) / 2;
  if (q == "steering_flip_nbar_derived") return (r / z - 1.0) / 4;
  throw InvalidInput("unknown quantity '" + q + "' for opo_thermal");
}

AnalyticValue tmtss(const std::string& q, const CatalogParams& p) {
  const double r = get(p, "r");
  const double n = get(p, "nbar");
  if (q == "target_cm") {
    const Matrix s = two_mode_squeezer(r);
    return Matrix((2 * n + 1) * s * s.transpose());
  }
  if (q == "entanglement_flip_r") return std::log(2 * n + 1);
  if (q == "steering_flip_r") return std::acosh(2 * n + 1);
  if (q == "entanglement_flip_r_derived") return 0.5 * std::log(2 * n + 1);
  if (q == "steering_flip_r_derived") return 0.5 * std::acosh(2 * n + 1);
  throw InvalidInput("unknown quantity '" + q + "' for tmtss");
}

}  // namespace

const char* to_string(CatalogId id) { return entry(id).name; }

CatalogId parse_catalog_id(const std::string& name) {
  for (const auto& e : table()) {
    if (name == e.name) return e.id;
  }
  throw InvalidInput("unknown catalog id '" + name + "'");
}

const std::vector<CatalogId>& all_catalog_ids() {
  static const std::vector<CatalogId> ids = {CatalogId::TwoOscThermal, CatalogId::TwoOscRWA,
                                             CatalogId::OPO,           CatalogId::CascadedOPO,
                                             CatalogId::OPOThermal,    CatalogId::TMTSS};
  return ids;
}

const std::vector<std::pair<std::string, double>>& catalog_parameters(CatalogId id) {
  return entry(id).params;
}

const std::vector<std::string>& catalog_quantities(CatalogId id) { return entry(id).quantities; }

CatalogParams resolve_params(CatalogId id, const CatalogParams& given) {
  const auto& e = entry(id);
  CatalogParams out;
  for (const auto& [name, value] : e.params) out[name] = value;
  for (const auto& [name, value] : given) {
    if (!out.count(name)) {
      throw InvalidInput(std::string("unknown parameter '") + name + "' for " + e.name);
    }
    if (!std::isfinite(value)) throw InvalidInput("parameter '" + name + "' is not finite");
    out[name] = value;
  }
  for (const auto& [name, value] : out) {
    const bool nonneg = name.rfind("zeta", 0) == 0 || name.rfind("nbar", 0) == 0 || name == "r";
    if (nonneg && value < 0) throw InvalidInput("parameter '" + name + "' must be >= 0");
    if (name == "kappa" && id != CatalogId::TwoOscThermal && !(value > 0)) {
      throw InvalidInput("parameter 'kappa' must be > 0");
    }
    if (name == "kappa" && value < 0) throw InvalidInput("parameter 'kappa' must be >= 0");
  }
  return out;
}

ModelSpec catalog_build(CatalogId id, const CatalogParams& given) {
  const CatalogParams p = resolve_params(id, given);
  ModelSpec m;
  switch (id) {
    case CatalogId::TwoOscThermal: {
      const double k = get(p, "kappa");
      Matrix h = Matrix::Zero(4, 4);
      h.topLeftCorner(2, 2) << get(p, "omega1") + k / 2, -k / 2, -k / 2, get(p, "omega2") + k / 2;
      h(2, 2) = get(p, "omega1");
      h(3, 3) = get(p, "omega2");
      m.hamiltonian = {h, Vector::Zero(4), 0.0};
      add_thermal_baths(m, 2, {get(p, "zeta1"), get(p, "zeta2")}, {get(p, "nbar1"), get(p, "nbar2")});
      break;
    }
    case CatalogId::TwoOscRWA: {
      Matrix h = Matrix::Zero(4, 4);
      Eigen::Matrix2d b;
      b << get(p, "varpi1"), get(p, "Omega"), get(p, "Omega"), get(p, "varpi2");
      h.topLeftCorner(2, 2) = b;
      h.bottomRightCorner(2, 2) = b;
      m.hamiltonian = {h, Vector::Zero(4), 0.0};
      add_thermal_baths(m, 2, {get(p, "zeta1"), get(p, "zeta2")}, {get(p, "nbar1"), get(p, "nbar2")});
      break;
    }
    case CatalogId::OPO: {
      Matrix hqp(1, 1);
      hqp << get(p, "eps") / 2;
      m.hamiltonian = {qp_hessian(hqp), Vector::Zero(2), 0.0};
      m.lindblad.push_back(annihilation(1, 0, get(p, "kappa")));
      break;
    }
    case CatalogId::CascadedOPO: {
      const double k = get(p, "kappa");
      Matrix hqp(2, 2);
      hqp << get(p, "eps1") / 2, -k / 2, k / 2, get(p, "eps2") / 2;
      m.hamiltonian = {qp_hessian(hqp), Vector::Zero(4), 0.0};
      // L = sqrt(kappa) (a_1 + a_2)
      LindbladVector l = annihilation(2, 0, k);
      l.lambda += annihilation(2, 1, k).lambda;
      m.lindblad.push_back(l);
      break;
    }
    case CatalogId::OPOThermal: {
      const double e = get(p, "eps");
      const double k = get(p, "kappa");
      Matrix hqp(2, 2);
      hqp << e / 2, k / 2, k / 2, e / 2;
      m.hamiltonian = {qp_hessian(hqp), Vector::Zero(4), 0.0};
      add_thermal_baths(m, 2, {get(p, "zeta"), get(p, "zeta")}, {get(p, "nbar"), get(p, "nbar")});
      break;
    }
    case CatalogId::TMTSS: {
      const double z = get(p, "zeta");
      if (!(z > 0)) throw InvalidInput("tmtss model form needs zeta > 0");
      const auto res = engineer_gibbs_target(two_mode_squeezer(get(p, "r")), 2 * get(p, "nbar") + 1,
                                             -(z / 2) * Matrix::Identity(4, 4));
      m = to_model(res.realization);
      break;
    }
  }
  return m;
}

AnalyticValue catalog_analytic(CatalogId id, const std::string& quantity,
                               const CatalogParams& given) {
  const CatalogParams p = resolve_params(id, given);
  switch (id) {
    case CatalogId::TwoOscThermal:
      return two_osc_thermal(quantity, p);
    case CatalogId::TwoOscRWA:
      return two_osc_rwa(quantity, p);
    case CatalogId::OPO:
      return opo(quantity, p);
    case CatalogId::CascadedOPO:
      return cascaded_opo(quantity, p);
    case CatalogId::OPOThermal:
      return opo_thermal(quantity, p);
    case CatalogId::TMTSS:
      return tmtss(quantity, p);
  }
  throw InvalidInput("unknown catalog id");
}

}  // namespace gsteady
