#include "gsteady/cli.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsteady/catalog.h"
#include "gsteady/criteria.h"
#include "gsteady/errors.h"
#include "gsteady/evolution.h"
#include "gsteady/lindblad_model.h"
#include "gsteady/lyapunov.h"
#include "gsteady/model_document.h"
#include "gsteady/williamson.h"

namespace gsteady {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
  double v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw InvalidInput(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidInput("range '" + text + "': expected a:b:steps");
  const double a = parse_number(parts[0], "range start");
  const double b = parse_number(parts[1], "range end");
  const double steps = parse_number(parts[2], "range steps");
  if (steps < 1 || steps != std::floor(steps) || steps > 1e7) {
    throw InvalidInput("range '" + text + "': steps must be a positive integer");
  }
  if (a == b || steps == 1) return {a};
  const int k = static_cast<int>(steps);
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = i == k - 1 ? b : a + (b - a) * i / (k - 1);
  return v;
}

namespace {

using ojson = nlohmann::ordered_json;

struct Context {
  bool json = false;
  std::optional<double> tol;
};

Tolerances tolerances_for(const ModelDocument& doc, const Context& ctx) {
  Tolerances t = doc.tolerances;
  if (ctx.tol) t.residual_tol = *ctx.tol;
  t.validate();
  return t;
}

// ---- JSON output with fixed number formatting ----

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(format_double(v)); }

ojson vec_json(const Eigen::Ref<const Vector>& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

ojson mat_json(const Eigen::Ref<const Matrix>& m) {
  ojson a = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

bool is_flat(const ojson& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void dump(const ojson& j, std::ostream& os, int level) {
  const std::string pad(2 * (level + 1), ' ');
  const std::string close(2 * level, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(it.key()).dump() << ": ";
        dump(it.value(), os, level + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (is_flat(j)) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump(j[i], os, level + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(j[i], os, level + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case ojson::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

void emit_json(const ojson& j, std::ostream& os) {
  dump(j, os, 0);
  os << "\n";
}

// ---- text output ----

void print_vector(std::ostream& os, const std::string& name, const Eigen::Ref<const Vector>& v) {
  os << name << ":";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << " " << format_double(v(i));
  os << "\n";
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::Ref<const Matrix>& m) {
  os << name << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << " " << format_double(m(r, c));
    os << "\n";
  }
}

std::string complex_text(Complex z) {
  return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

ojson complex_json(const std::vector<Complex>& zs) {
  ojson a = ojson::array();
  for (const auto& z : zs) a.push_back(ojson::array({num(z.real()), num(z.imag())}));
  return a;
}

// ---- commands ----

struct SteadyOpts {
  std::string model;
};

void cmd_steady(const SteadyOpts& o, const Context& ctx, std::ostream& os) {
  const auto doc = load_model_document(o.model);
  const auto tol = tolerances_for(doc, ctx);
  const auto dyn = build_dynamics(doc.model(), tol);
  const auto report = stability_check(dyn, tol);
  require_stable(dyn.gamma, tol);
  const Matrix v = steady_state(dyn, tol);
  const Vector mean = mean_fixed_point(dyn, tol);
  const double residual = lyapunov_residual(dyn.gamma, v, dyn.diffusion);
  if (ctx.json) {
    ojson j;
    j["modes"] = dyn.modes();
    j["gamma"] = mat_json(dyn.gamma);
    j["diffusion"] = mat_json(dyn.diffusion);
    j["spectral_abscissa"] = num(report.spectral_abscissa);
    j["cm"] = mat_json(v);
    j["mean"] = vec_json(mean);
    j["lyapunov_residual"] = num(residual);
    emit_json(j, os);
    return;
  }
  print_matrix(os, "Gamma", dyn.gamma);
  print_matrix(os, "D", dyn.diffusion);
  os << "spectral abscissa: " << format_double(report.spectral_abscissa) << "\n";
  print_matrix(os, "V", v);
  print_vector(os, "mean", mean);
  os << "Lyapunov residual: " << format_double(residual) << "\n";
}

struct StabilityOpts {
  std::string model;
};

int cmd_stability(const StabilityOpts& o, const Context& ctx, std::ostream& os, std::ostream& err) {
  const auto doc = load_model_document(o.model);
  const auto tol = tolerances_for(doc, ctx);
  const auto dyn = build_dynamics(doc.model(), tol);
  const auto r = stability_check(dyn, tol);
  const std::string status = r.asymptotically_stable ? "asymptotically stable"
                             : r.marginal            ? "marginally stable"
                                                     : "unstable";
  if (ctx.json) {
    ojson j;
    j["status"] = status;
    j["asymptotically_stable"] = r.asymptotically_stable;
    j["spectral_abscissa"] = num(r.spectral_abscissa);
    j["spectrum"] = complex_json(r.spectrum);
    emit_json(j, os);
  } else {
    os << "status: " << status << "\n";
    os << "spectral abscissa: " << format_double(r.spectral_abscissa) << "\n";
    os << "spectrum:";
    for (const auto& z : r.spectrum) os << " " << complex_text(z);
    os << "\n";
  }
  if (r.asymptotically_stable) return kExitOk;
  err << "error: " << status << " (spectral abscissa " << format_double(r.spectral_abscissa)
      << "); steady-state pipeline refused\n";
  return kExitStability;
}

Partition parse_partition(const std::string& text, int n) {
  if (text.empty()) return Partition::last_mode(n);
  std::vector<int> modes;
  for (const auto& item : split(text, ',')) {
    const double v = parse_number(item, "partition");
    if (v != std::floor(v) || v < 1 || v > n) {
      throw InvalidInput("partition: mode '" + item + "' is not in 1.." + std::to_string(n));
    }
    modes.push_back(static_cast<int>(v) - 1);
  }
  return Partition(n, modes);
}

std::vector<CriterionKind> parse_kinds(const std::vector<std::string>& names, int n,
                                       const std::string& partition, const std::string& steered) {
  if (steered != "1" && steered != "2" && steered != "both") {
    throw InvalidInput("--steered must be 1, 2 or both");
  }
  std::vector<CriterionKind> out;
  const bool all = names.empty() || (names.size() == 1 && names[0] == "all");
  auto add_partitioned = [&](CriterionType t) {
    if (n < 2) {
      if (all) return;
      throw InvalidInput("criterion needs at least two modes");
    }
    const Partition p = parse_partition(partition, n);
    if (t == CriterionType::Separability) {
      out.push_back(CriterionKind::separability(p));
      return;
    }
    if (steered != "2") out.push_back(CriterionKind::steerability(p, Part::One));
    if (steered != "1") out.push_back(CriterionKind::steerability(p, Part::Two));
  };
  const std::vector<std::string> list =
      all ? std::vector<std::string>{"uncertainty", "classicality", "separability", "steerability"}
          : names;
  for (const auto& k : list) {
    if (k == "uncertainty") {
      out.push_back(CriterionKind::uncertainty());
    } else if (k == "classicality") {
      out.push_back(CriterionKind::classicality());
    } else if (k == "separability") {
      add_partitioned(CriterionType::Separability);
    } else if (k == "steerability") {
      add_partitioned(CriterionType::Steerability);
    } else {
      throw InvalidInput("unknown criterion kind '" + k + "'");
    }
  }
  return out;
}

ojson result_json(const CriterionResult& r) {
  ojson j;
  j["criterion"] = r.kind.name();
  j["level"] = to_string(r.level);
  j["verdict"] = to_string(r.verdict);
  j["conclusiveness"] = to_string(r.conclusiveness);
  j["label"] = r.label;
  j["inertia"] = ojson::array({r.inertia.n_plus, r.inertia.n_zero, r.inertia.n_minus});
  j["min_eigenvalue"] = num(r.min_eigenvalue());
  j["spectrum"] = vec_json(r.spectrum);
  return j;
}

void result_text(const CriterionResult& r, std::ostream& os) {
  os << r.kind.name() << " (" << to_string(r.level) << "): " << r.label << "\n";
  os << "  verdict: " << to_string(r.verdict) << ", " << to_string(r.conclusiveness) << "\n";
  os << "  inertia: (" << r.inertia.n_plus << ", " << r.inertia.n_zero << ", " << r.inertia.n_minus
     << ")\n";
  print_vector(os, "  spectrum", r.spectrum);
}

struct CriteriaOpts {
  std::string model;
  std::vector<std::string> kinds;
  std::string partition;
  std::string level = "both";
  std::string steered = "both";
};

void cmd_criteria(const CriteriaOpts& o, const Context& ctx, std::ostream& os) {
  if (o.level != "state" && o.level != "env" && o.level != "both") {
    throw InvalidInput("--level must be state, env or both");
  }
  const auto doc = load_model_document(o.model);
  const auto tol = tolerances_for(doc, ctx);
  std::optional<GaussianDynamics> dyn;
  Matrix v;
  if (doc.has_model()) {
    dyn = build_dynamics(doc.model(), tol);
    require_stable(dyn->gamma, tol);
    if (o.level != "env") v = steady_state(*dyn, tol);
  } else {
    if (o.level == "env") throw InvalidInput("environment criteria need a model, not a CM");
    v = *doc.cm;
  }
  const int n = dyn ? dyn->modes() : mode_count(v);
  const auto kinds = parse_kinds(o.kinds, n, o.partition, o.steered);

  std::vector<CriterionResult> results;
  for (const auto& k : kinds) {
    if (o.level != "env") results.push_back(state_criterion(v, k, tol));
    if (o.level != "state" && dyn) results.push_back(environment_criterion(*dyn, k, tol));
  }
  if (ctx.json) {
    ojson j;
    ojson list = ojson::array();
    for (const auto& r : results) list.push_back(result_json(r));
    j["results"] = list;
    emit_json(j, os);
    return;
  }
  for (const auto& r : results) result_text(r, os);
}

// ---- sweep ----

struct SweepQuantity {
  std::string column;
  enum { Abscissa, MinEig, Analytic } type = Analytic;
  CriterionType criterion = CriterionType::Uncertainty;
  Part steered = Part::One;
  Level level = Level::State;
};

SweepQuantity parse_criterion_spec(const std::string& kind, const std::string& level) {
  SweepQuantity q;
  q.type = SweepQuantity::MinEig;
  if (kind == "uncertainty") {
    q.criterion = CriterionType::Uncertainty;
  } else if (kind == "classicality") {
    q.criterion = CriterionType::Classicality;
  } else if (kind == "separability") {
    q.criterion = CriterionType::Separability;
  } else if (kind == "steer1" || kind == "steer2") {
    q.criterion = CriterionType::Steerability;
    q.steered = kind == "steer1" ? Part::One : Part::Two;
  } else {
    throw InvalidInput("unknown sweep criterion '" + kind + "'");
  }
  if (level == "state") {
    q.level = Level::State;
  } else if (level == "env") {
    q.level = Level::Environment;
  } else {
    throw InvalidInput("unknown sweep level '" + level + "'");
  }
  return q;
}

SweepQuantity parse_quantity(const std::string& text, CatalogId id) {
  if (text == "abscissa") return {text, SweepQuantity::Abscissa};
  if (text.rfind("min_eig:", 0) == 0) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidInput("quantity '" + text + "': expected min_eig:kind:level");
    auto q = parse_criterion_spec(parts[1], parts[2]);
    q.column = text;
    return q;
  }
  const auto& names = catalog_quantities(id);
  if (std::find(names.begin(), names.end(), text) == names.end()) {
    throw InvalidInput("unknown sweep quantity '" + text + "' for " + to_string(id));
  }
  return {text, SweepQuantity::Analytic};
}

CriterionKind kind_for(const SweepQuantity& q, int n, const std::string& partition) {
  switch (q.criterion) {
    case CriterionType::Uncertainty:
      return CriterionKind::uncertainty();
    case CriterionType::Classicality:
      return CriterionKind::classicality();
    case CriterionType::Separability:
      return CriterionKind::separability(parse_partition(partition, n));
    case CriterionType::Steerability:
      return CriterionKind::steerability(parse_partition(partition, n), q.steered);
  }
  throw InvalidInput("unknown criterion");
}

double min_eig(const ModelDocument& doc, const SweepQuantity& q, const std::string& partition,
               const Tolerances& tol) {
  const auto dyn = build_dynamics(doc.model(), tol);
  const auto kind = kind_for(q, dyn.modes(), partition);
  if (q.level == Level::Environment) return environment_criterion(dyn, kind, tol).min_eigenvalue();
  return state_criterion(steady_state(dyn, tol), kind, tol).min_eigenvalue();
}

double evaluate(const ModelDocument& doc, const SweepQuantity& q, const std::string& partition,
                const Tolerances& tol) {
  switch (q.type) {
    case SweepQuantity::Abscissa:
      return stability_check(build_dynamics(doc.model(), tol), tol).spectral_abscissa;
    case SweepQuantity::MinEig:
      return min_eig(doc, q, partition, tol);
    case SweepQuantity::Analytic: {
      const auto value = catalog_analytic(*doc.catalog, q.column, doc.params);
      if (!std::holds_alternative<double>(value)) {
        throw InvalidInput("sweep quantity '" + q.column + "' is not a scalar");
      }
      return std::get<double>(value);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CatalogParams tied(const std::vector<std::string>& names, double value) {
  CatalogParams p;
  for (const auto& n : names) p[n] = value;
  return p;
}

// Zero crossing of f on [lo, hi]; nan when the ends do not bracket a sign change.
template <typename F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) return std::numeric_limits<double>::quiet_NaN();
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::isnan(fm)) return fm;
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct SweepOpts {
  std::string model;
  std::string param;
  std::string range;
  std::string param2;
  std::string range2;
  std::vector<std::string> quantities;
  std::vector<std::string> thresholds;
  std::string bisect_param;
  std::string bisect_range;
  std::string partition;
  int threads = 0;
};

void cmd_sweep(const SweepOpts& o, const Context& ctx, std::ostream& os) {
  const auto doc = load_model_document(o.model);
  if (!doc.catalog) throw InvalidInput("parameter sweeps need a catalog model document");
  const auto tol = tolerances_for(doc, ctx);
  const auto names1 = split(o.param, ',');
  const auto values1 = parse_range(o.range);
  std::vector<std::string> names2;
  std::vector<double> values2 = {0.0};
  if (!o.param2.empty()) {
    names2 = split(o.param2, ',');
    values2 = parse_range(o.range2);
  } else if (!o.range2.empty()) {
    throw InvalidInput("--range2 given without --param2");
  }
  // Validates the parameter names.
  resolve_params(*doc.catalog, tied(names1, values1[0]));
  if (!names2.empty()) resolve_params(*doc.catalog, tied(names2, values2[0]));

  std::vector<SweepQuantity> quantities;
  for (const auto& q : o.quantities) quantities.push_back(parse_quantity(q, *doc.catalog));
  std::vector<SweepQuantity> thresholds;
  std::vector<std::string> bisect_names;
  double bisect_lo = 0, bisect_hi = 0;
  if (!o.thresholds.empty()) {
    if (o.bisect_param.empty() || o.bisect_range.empty()) {
      throw InvalidInput("--threshold needs --bisect and --bisect-range");
    }
    bisect_names = split(o.bisect_param, ',');
    resolve_params(*doc.catalog, tied(bisect_names, 1.0));
    const auto ends = split(o.bisect_range, ':');
    if (ends.size() != 2) throw InvalidInput("--bisect-range: expected lo:hi");
    bisect_lo = parse_number(ends[0], "bisect range");
    bisect_hi = parse_number(ends[1], "bisect range");
    if (!(bisect_lo < bisect_hi)) throw InvalidInput("--bisect-range: need lo < hi");
    for (const auto& t : o.thresholds) {
      const auto parts = split(t, ':');
      if (parts.size() != 2) throw InvalidInput("threshold '" + t + "': expected kind:level");
      auto q = parse_criterion_spec(parts[0], parts[1]);
      q.column = "threshold[" + t + "]";
      thresholds.push_back(q);
    }
  }
  if (quantities.empty() && thresholds.empty()) throw InvalidInput("sweep needs --quantity or --threshold");

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "+" : "") + v[i];
    return s;
  };
  std::vector<std::string> header = {join(names1)};
  if (!names2.empty()) header.push_back(join(names2));
  for (const auto& q : quantities) header.push_back(q.column);
  for (const auto& q : thresholds) header.push_back(q.column);

  const size_t rows = values1.size() * values2.size();
  std::vector<std::vector<double>> table(rows);
  std::vector<std::exception_ptr> errors(rows);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto run_row = [&](size_t idx) {
    const double a = values1[idx / values2.size()];
    const double b = values2[idx % values2.size()];
    CatalogParams over = tied(names1, a);
    if (!names2.empty()) {
      for (const auto& [k, v] : tied(names2, b)) over[k] = v;
    }
    std::vector<double> row = {a};
    if (!names2.empty()) row.push_back(b);
    try {
      const auto point = doc.with_params(over);
      for (const auto& q : quantities) {
        double value = nan;
        try {
          value = evaluate(point, q, o.partition, tol);
        } catch (const StabilityError&) {
        } catch (const SolverError&) {
        }
        row.push_back(value);
      }
      for (const auto& q : thresholds) {
        auto f = [&](double x) {
          try {
            return evaluate(point.with_params(tied(bisect_names, x)), q, o.partition, tol);
          } catch (const StabilityError&) {
          } catch (const SolverError&) {
          }
          return nan;
        };
        row.push_back(bisect(f, bisect_lo, bisect_hi));
      }
    } catch (...) {
      errors[idx] = std::current_exception();
    }
    table[idx] = std::move(row);
  };

  unsigned workers = o.threads > 0 ? static_cast<unsigned>(o.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, rows));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < rows; i = next++) run_row(i);
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (ctx.json) {
    ojson j;
    j["columns"] = header;
    ojson list = ojson::array();
    for (const auto& row : table) {
      ojson r = ojson::array();
      for (double v : row) r.push_back(num(v));
      list.push_back(r);
    }
    j["rows"] = list;
    emit_json(j, os);
    return;
  }
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : table) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << "\n";
  }
}

// ---- evolve ----

struct EvolveOpts {
  std::string model;
  std::optional<double> t_end;
  double dt = 0.0;
  double v0_scale = 1.0;
  int samples = 1001;
};

void cmd_evolve(const EvolveOpts& o, const Context& ctx, std::ostream& os) {
  const auto doc = load_model_document(o.model);
  const auto tol = tolerances_for(doc, ctx);
  const auto dyn = build_dynamics(doc.model(), tol);
  double t_end = 0;
  if (o.t_end) {
    t_end = *o.t_end;
  } else {
    const auto r = stability_check(dyn, tol);
    if (!r.asymptotically_stable) {
      throw InvalidInput("--t-end is required when the drift matrix is not asymptotically stable");
    }
    t_end = 40.0 / std::abs(r.spectral_abscissa);
  }
  const int dim = 2 * dyn.modes();
  const auto traj = evolve(dyn, Vector::Zero(dim), o.v0_scale * Matrix::Identity(dim, dim), t_end,
                           o.dt, o.samples);
  if (ctx.json) {
    ojson j;
    j["times"] = vec_json(Eigen::Map<const Vector>(traj.times.data(), traj.times.size()));
    ojson means = ojson::array();
    ojson cms = ojson::array();
    for (size_t k = 0; k < traj.times.size(); ++k) {
      means.push_back(vec_json(traj.means[k]));
      cms.push_back(mat_json(traj.cms[k]));
    }
    j["means"] = means;
    j["cms"] = cms;
    emit_json(j, os);
    return;
  }
  os << "t";
  for (int i = 0; i < dim; ++i) os << ",x" << i + 1;
  for (int i = 0; i < dim; ++i) {
    for (int k = i; k < dim; ++k) os << ",V" << i + 1 << "_" << k + 1;
  }
  os << "\n";
  for (size_t s = 0; s < traj.times.size(); ++s) {
    os << format_double(traj.times[s]);
    for (int i = 0; i < dim; ++i) os << "," << format_double(traj.means[s](i));
    for (int i = 0; i < dim; ++i) {
      for (int k = i; k < dim; ++k) os << "," << format_double(traj.cms[s](i, k));
    }
    os << "\n";
  }
}

// ---- williamson ----

struct WilliamsonOpts {
  std::string model;
};

void cmd_williamson(const WilliamsonOpts& o, const Context& ctx, std::ostream& os) {
  const auto doc = load_model_document(o.model);
  const auto tol = tolerances_for(doc, ctx);
  Matrix m;
  if (doc.cm) {
    m = *doc.cm;
  } else {
    const auto dyn = build_dynamics(doc.model(), tol);
    m = steady_state(dyn, tol);
  }
  const auto wd = williamson_decompose(m, tol);
  const int n = mode_count(m);
  const Matrix j = symplectic_form(n);
  const double diag_res = max_abs(wd.s * m * wd.s.transpose() - wd.lambda());
  const double form_res = max_abs(wd.s * j * wd.s.transpose() - j);
  const double band = tol.eig_zero_band * std::max(1.0, wd.mu.maxCoeff());
  const bool physical = wd.mu.minCoeff() >= 1.0 - band;
  const bool pure = is_pure(m, tol);
  if (ctx.json) {
    ojson out;
    out["symplectic_eigenvalues"] = vec_json(wd.mu);
    out["s"] = mat_json(wd.s);
    out["lambda"] = mat_json(wd.lambda());
    out["diagonalization_residual"] = num(diag_res);
    out["symplecticity_residual"] = num(form_res);
    out["physical"] = physical;
    out["pure"] = pure;
    emit_json(out, os);
    return;
  }
  print_vector(os, "symplectic eigenvalues", wd.mu);
  print_matrix(os, "S", wd.s);
  os << "||S M S^T - Lambda||: " << format_double(diag_res) << "\n";
  os << "||S J S^T - J||: " << format_double(form_res) << "\n";
  os << "physical: " << (physical ? "yes" : "no") << "\n";
  os << "pure: " << (pure ? "yes" : "no") << "\n";
}

// ---- engineer ----

struct EngineerOpts {
  std::string target;
  std::string catalog;
  std::string params;
  std::string method = "auto";
  double rate = 1.0;
  std::optional<double> purifier;
};

void check_physical_target(const WilliamsonDecomposition& wd, const Tolerances& tol) {
  const double band = tol.eig_zero_band * std::max(1.0, wd.mu.maxCoeff());
  if (wd.mu.minCoeff() < 1.0 - band) {
    std::ostringstream os;
    os << "target is not a physical covariance matrix (symplectic eigenvalue "
       << format_double(wd.mu.minCoeff()) << " < 1); no Lindblad reservoir realizes it";
    throw RealizabilityError(os.str(), wd.mu.minCoeff() - 1.0);
  }
}

EngineeredReservoir engineer_target(const Matrix& target, const std::string& method, double rate,
                                    const Tolerances& tol) {
  const auto wd = williamson_decompose(target, tol);
  check_physical_target(wd, tol);
  const double spread = wd.mu.maxCoeff() - wd.mu.minCoeff();
  const bool degenerate = spread <= std::sqrt(tol.residual_tol) * wd.mu.maxCoeff();
  const std::string m = method == "auto" ? (degenerate ? "gibbs" : "covariant") : method;
  const Matrix id = Matrix::Identity(target.rows(), target.cols());
  if (m == "gibbs") {
    if (!degenerate) {
      throw RealizabilityError(
          "gibbs method needs a target alpha S S^T (all symplectic eigenvalues equal)", spread);
    }
    return engineer_gibbs_target(wd.s.inverse(), wd.mu.mean(), -(rate / 2) * id, tol);
  }
  if (m == "covariant") {
    // Lambda is a thermal CM, the steady state of Gamma' = -beta I, D' = 2 beta Lambda.
    return engineer_covariant_target(beta_reservoir(wd.lambda(), rate / 2), wd.s, tol);
  }
  throw InvalidInput("--method must be gibbs, covariant or auto");
}

void cmd_engineer(const EngineerOpts& o, const Context& ctx, std::ostream& os) {
  if (o.target.empty() == o.catalog.empty()) {
    throw InvalidInput("engineer needs exactly one of --target or --catalog");
  }
  if (!(o.rate > 0) || !std::isfinite(o.rate)) throw InvalidInput("--rate must be positive");
  Tolerances tol;
  EngineeredReservoir res;
  if (!o.target.empty()) {
    const auto doc = load_model_document(o.target);
    tol = tolerances_for(doc, ctx);
    if (!doc.cm) throw InvalidInput("--target must be a {\"cm\": ...} document");
    res = engineer_target(*doc.cm, o.method, o.rate, tol);
  } else {
    tol = tolerances_for(ModelDocument{}, ctx);
    const CatalogId id = parse_catalog_id(o.catalog);
    const auto p = resolve_params(id, parse_param_list(o.params));
    if (id == CatalogId::TMTSS) {
      if (o.method == "covariant") {
        res = engineer_target(std::get<Matrix>(catalog_analytic(id, "target_cm", p)), "covariant",
                              o.rate, tol);
      } else if (o.method == "gibbs" || o.method == "auto") {
        const double z = p.at("zeta");
        res = engineer_gibbs_target(two_mode_squeezer(p.at("r")), 2 * p.at("nbar") + 1,
                                    -(z / 2) * Matrix::Identity(4, 4), tol);
      } else {
        throw InvalidInput("--method must be gibbs, covariant or auto");
      }
    } else if (id == CatalogId::CascadedOPO) {
      if (o.method == "gibbs") throw InvalidInput("cascaded_opo targets use the covariant method");
      if (!o.purifier) throw InvalidInput("cascaded_opo engineering needs --purifier <eps>");
      const auto dyn = build_dynamics(catalog_build(id, p), tol);
      LyapunovTriple triple{dyn.gamma, dyn.diffusion, steady_state(dyn, tol)};
      res = engineer_covariant_target(triple, opo_purifier(*o.purifier, p.at("kappa")), tol);
    } else {
      throw InvalidInput("engineer --catalog supports tmtss and cascaded_opo");
    }
  }

  if (ctx.json) {
    ojson j;
    j["gamma"] = mat_json(res.gamma);
    j["diffusion"] = mat_json(res.diffusion);
    j["target"] = mat_json(res.target);
    j["hessian"] = mat_json(res.realization.hessian);
    ojson lambdas = ojson::array();
    for (const auto& l : res.realization.lambdas) {
      ojson e;
      e["lambda_re"] = vec_json(Vector(l.real()));
      e["lambda_im"] = vec_json(Vector(l.imag()));
      lambdas.push_back(e);
    }
    j["lindblad"] = lambdas;
    ojson v;
    v["steady_state"] = mat_json(res.steady_state);
    v["target_mismatch"] = num(res.target_mismatch);
    v["lyapunov_residual"] = num(res.lyapunov_residual);
    v["passed"] = true;
    j["verification"] = v;
    emit_json(j, os);
    return;
  }
  print_matrix(os, "Gamma_p", res.gamma);
  print_matrix(os, "D_p", res.diffusion);
  print_matrix(os, "target", res.target);
  print_matrix(os, "H", res.realization.hessian);
  for (size_t k = 0; k < res.realization.lambdas.size(); ++k) {
    const auto& l = res.realization.lambdas[k];
    print_vector(os, "lambda" + std::to_string(k + 1) + " re", l.real());
    print_vector(os, "lambda" + std::to_string(k + 1) + " im", l.imag());
  }
  os << "verification: steady state matches target (relative mismatch "
     << format_double(res.target_mismatch) << ", residual " << format_double(res.lyapunov_residual)
     << ")\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian steady states of quadratic Lindblad models", "gsteady"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  double tol_value = 0;
  std::string output;
  app.add_flag("--json", ctx.json, "JSON output");
  auto* tol_opt = app.add_option("--tol", tol_value, "Relative residual tolerance");
  app.add_option("--output", output, "Write the report to this path");

  SteadyOpts steady_o;
  auto* steady = app.add_subcommand("steady", "Solve for the steady-state CM");
  steady->add_option("model", steady_o.model, "Model document")->required();

  CriteriaOpts crit_o;
  auto* crit = app.add_subcommand("criteria", "Bona-fide criteria at state and environment level");
  crit->add_option("model", crit_o.model, "Model or CM document")->required();
  crit->add_option("--kind", crit_o.kinds, "uncertainty, classicality, separability, steerability, all");
  crit->add_option("--partition", crit_o.partition, "1-based modes of part two, e.g. 2 or 2,3");
  crit->add_option("--level", crit_o.level, "state, env or both");
  crit->add_option("--steered", crit_o.steered, "Steered part for steerability: 1, 2 or both");

  SweepOpts sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep of a catalog model (CSV)");
  sweep->add_option("model", sweep_o.model, "Catalog model document")->required();
  sweep->add_option("--param", sweep_o.param, "Parameter name(s); commas tie several together")->required();
  sweep->add_option("--range", sweep_o.range, "a:b:steps")->required();
  sweep->add_option("--param2", sweep_o.param2, "Second grid parameter");
  sweep->add_option("--range2", sweep_o.range2, "a:b:steps for --param2");
  sweep->add_option("--quantity", sweep_o.quantities,
                    "abscissa, min_eig:<kind>:<state|env>, or a catalog closed form");
  sweep->add_option("--threshold", sweep_o.thresholds, "<kind>:<state|env> zero crossing by bisection");
  sweep->add_option("--bisect", sweep_o.bisect_param, "Parameter(s) bisected for --threshold");
  sweep->add_option("--bisect-range", sweep_o.bisect_range, "lo:hi");
  sweep->add_option("--partition", sweep_o.partition, "1-based modes of part two");
  sweep->add_option("--threads", sweep_o.threads, "Worker threads (default: all cores)");

  EngineerOpts eng_o;
  double purifier = 0;
  auto* eng = app.add_subcommand("engineer", "Reservoir whose steady state is a target CM");
  eng->add_option("--target", eng_o.target, "{\"cm\": ...} document");
  eng->add_option("--catalog", eng_o.catalog, "tmtss or cascaded_opo");
  eng->add_option("--params", eng_o.params, "name=value,...");
  eng->add_option("--method", eng_o.method, "gibbs, covariant or auto");
  eng->add_option("--rate", eng_o.rate, "Relaxation rate of the isotropic reservoir");
  auto* purifier_opt = eng->add_option("--purifier", purifier, "eps of the OPO purifying map");

  EvolveOpts evo_o;
  double t_end = 0;
  auto* evo = app.add_subcommand("evolve", "RK4 trajectory of mean and CM (CSV)");
  evo->add_option("model", evo_o.model, "Model document")->required();
  auto* t_end_opt = evo->add_option("--t-end", t_end, "Final time (default 40/|abscissa|)");
  evo->add_option("--dt", evo_o.dt, "Time step (default min(1e-3, 0.05/||Gamma||))");
  evo->add_option("--v0-scale", evo_o.v0_scale, "Initial CM is this multiple of I");
  evo->add_option("--samples", evo_o.samples, "Maximum number of output rows");

  WilliamsonOpts wil_o;
  auto* wil = app.add_subcommand("williamson", "Symplectic spectrum and Williamson form");
  wil->add_option("model", wil_o.model, "Model or CM document")->required();

  StabilityOpts stab_o;
  auto* stab = app.add_subcommand("stability", "Spectrum and asymptotic stability of Gamma");
  stab->add_option("model", stab_o.model, "Model document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (*tol_opt) ctx.tol = tol_value;
  if (*purifier_opt) eng_o.purifier = purifier;
  if (*t_end_opt) evo_o.t_end = t_end;

  std::ostringstream body;
  int code = kExitOk;
  const bool engineering = eng->parsed();
  try {
    if (steady->parsed()) cmd_steady(steady_o, ctx, body);
    if (crit->parsed()) cmd_criteria(crit_o, ctx, body);
    if (sweep->parsed()) cmd_sweep(sweep_o, ctx, body);
    if (engineering) cmd_engineer(eng_o, ctx, body);
    if (evo->parsed()) cmd_evolve(evo_o, ctx, body);
    if (wil->parsed()) cmd_williamson(wil_o, ctx, body);
    if (stab->parsed()) code = cmd_stability(stab_o, ctx, body, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    code = kExitInput;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitStability;
  } catch (const RealizabilityError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitEngineering;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    code = engineering ? kExitEngineering : kExitStability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kExitInput;
  }

  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << output << "'\n";
      return kExitInput;
    }
    f << body.str();
  } else {
    out << body.str();
  }
  return code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"gsteady"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gsteady
