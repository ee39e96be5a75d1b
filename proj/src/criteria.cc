#include "gsteady/criteria.h"

#include <algorithm>
#include <sstream>

#include "gsteady/errors.h"
#include "gsteady/lyapunov.h"

namespace gsteady {

Partition::Partition(int n, std::vector<int> part_two) : n_(n), part_two_(std::move(part_two)) {
  if (n < 2) throw InvalidInput("partition: need at least two modes");
  std::sort(part_two_.begin(), part_two_.end());
  part_two_.erase(std::unique(part_two_.begin(), part_two_.end()), part_two_.end());
  if (part_two_.empty() || static_cast<int>(part_two_.size()) >= n) {
    throw InvalidInput("partition: part two must be a non-empty proper subset of the modes");
  }
  if (part_two_.front() < 0 || part_two_.back() >= n) {
    throw InvalidInput("partition: mode index out of range");
  }
}

Partition Partition::last_mode(int n) { return Partition(n, {n - 1}); }

std::vector<int> Partition::part_one() const {
  std::vector<int> out;
  for (int k = 0; k < n_; ++k) {
    if (!in_part_two(k)) out.push_back(k);
  }
  return out;
}

bool Partition::in_part_two(int mode) const {
  return std::binary_search(part_two_.begin(), part_two_.end(), mode);
}

std::string CriterionKind::name() const {
  auto modes = [](const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i] + 1;
    return os.str();
  };
  switch (type) {
    case CriterionType::Uncertainty:
      return "uncertainty";
    case CriterionType::Classicality:
      return "classicality";
    case CriterionType::Separability:
      return "separability[" + modes(partition->part_one()) + "|" + modes(partition->part_two()) +
             "]";
    case CriterionType::Steerability: {
      const auto one = partition->part_one();
      const auto& two = partition->part_two();
      const bool first = steered == Part::One;
      return "steerability[" + modes(first ? two : one) + "->" + modes(first ? one : two) + "]";
    }
  }
  return "?";
}

const char* to_string(Level l) { return l == Level::State ? "state" : "environment"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violated:
      return "violated";
    case Verdict::Marginal:
      return "marginal";
  }
  return "?";
}

const char* to_string(Conclusiveness c) {
  return c == Conclusiveness::IffCondition ? "iff" : "sufficient_only";
}

Matrix time_inversion(const Partition& p) {
  const int n = p.modes();
  Matrix t = Matrix::Identity(2 * n, 2 * n);
  for (int k : p.part_two()) t(n + k, n + k) = -1.0;
  return t;
}

namespace {

const Partition& require_partition(const CriterionKind& kind, int n) {
  if (!kind.partition) throw InvalidInput(kind.name() + ": criterion needs a partition");
  if (kind.partition->modes() != n) {
    throw InvalidInput("partition mode count does not match the matrix dimension");
  }
  return *kind.partition;
}

Verdict verdict_of(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return Verdict::Holds;
    case Definiteness::PositiveSemidefiniteMarginal:
      return Verdict::Marginal;
    case Definiteness::Indefinite:
      return Verdict::Violated;
  }
  return Verdict::Violated;
}

std::string label_for(const CriterionKind& kind, Verdict verdict, Conclusiveness c) {
  if (c == Conclusiveness::SufficientOnly && verdict == Verdict::Violated) return "inconclusive";
  const bool holds = verdict != Verdict::Violated;
  std::string base;
  switch (kind.type) {
    case CriterionType::Uncertainty:
      base = holds ? "physical" : "unphysical";
      break;
    case CriterionType::Classicality:
      base = holds ? "classical" : "nonclassical";
      break;
    case CriterionType::Separability: {
      const auto& p = *kind.partition;
      const bool multi = p.part_two().size() > 1 && p.part_one().size() > 1;
      if (!holds) {
        base = "entangled";
      } else {
        base = multi ? "PPT (separable or bound entangled)" : "separable";
      }
      break;
    }
    case CriterionType::Steerability:
      base = holds ? "non-steerable" : "steerable";
      break;
  }
  if (verdict == Verdict::Marginal) base += " (marginal)";
  return base;
}

CriterionResult finish(const CriterionKind& kind, Level level, CMatrix tested, Conclusiveness c,
                       const Tolerances& tol) {
  CriterionResult r;
  r.kind = kind;
  r.level = level;
  r.spectrum = hermitian_spectrum(tested, tol);
  r.tested_matrix = std::move(tested);
  r.inertia = inertia_of_spectrum(r.spectrum, tol);
  r.verdict = verdict_of(definiteness_of(r.inertia));
  r.conclusiveness = c;
  r.label = label_for(kind, r.verdict, c);
  return r;
}

}  // namespace

CMatrix xi_matrix(const CriterionKind& kind, int n) {
  const Complex i(0.0, 1.0);
  const Matrix j = symplectic_form(n);
  switch (kind.type) {
    case CriterionType::Uncertainty:
      return i * j.cast<Complex>();
    case CriterionType::Classicality:
      return -CMatrix::Identity(2 * n, 2 * n);
    case CriterionType::Separability: {
      const Matrix t = time_inversion(require_partition(kind, n));
      return i * (t * j * t).cast<Complex>();
    }
    case CriterionType::Steerability: {
      const auto& p = require_partition(kind, n);
      // T flips the measuring part, leaving J on the steered part only.
      const Partition measuring =
          kind.steered == Part::One ? p : Partition(n, p.part_one());
      const Matrix t = time_inversion(measuring);
      return i * (0.5 * (j + t * j * t)).cast<Complex>();
    }
  }
  throw InvalidInput("unknown criterion");
}

bool is_symmetric(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  return max_abs(m - m.transpose()) <= tol.residual_tol * std::max(max_abs(m), 1e-300);
}

CriterionResult state_criterion(const Eigen::Ref<const Matrix>& v, const CriterionKind& kind,
                                const Tolerances& tol) {
  const int n = mode_count(v);
  if (!is_symmetric(v, tol)) throw InvalidInput("state_criterion: covariance matrix is not symmetric");
  CMatrix tested = symmetrized(v).cast<Complex>() + xi_matrix(kind, n);
  return finish(kind, Level::State, std::move(tested), Conclusiveness::IffCondition, tol);
}

CriterionResult environment_criterion(const GaussianDynamics& dyn, const CriterionKind& kind,
                                      const Tolerances& tol) {
  const int n = mode_count(dyn.gamma);
  require_stable(dyn.gamma, tol);
  const CMatrix xi = xi_matrix(kind, n);
  const CMatrix gamma = dyn.gamma.cast<Complex>();
  const CMatrix d = dyn.diffusion.cast<Complex>();

  if (kind.type == CriterionType::Uncertainty) {
    CMatrix tested = shifted_q(d, gamma, xi, tol);
    if (dyn.upsilon.size() == tested.size()) {
      const CMatrix expected = 2.0 * dyn.upsilon.conjugate();
      const double gap = max_abs(tested - expected);
      if (gap > tol.residual_tol * std::max(1.0, max_abs(expected))) {
        std::ostringstream os;
        os << "environment uncertainty check: D_[iJ] differs from 2 conj(Upsilon) by " << gap;
        throw SolverError(os.str());
      }
    }
    CriterionResult r = finish(kind, Level::Environment, std::move(tested),
                               Conclusiveness::IffCondition, tol);
    if (r.verdict == Verdict::Violated) {
      throw SolverError("environment uncertainty check: D_[iJ] is indefinite");
    }
    r.verdict = Verdict::Holds;
    r.label = "physical";
    return r;
  }

  if (is_symmetric(dyn.gamma, tol)) {
    auto shifted = shifted_q_symmetric(d, gamma, xi, tol);
    return finish(kind, Level::Environment, std::move(shifted.matrix),
                  Conclusiveness::IffCondition, tol);
  }
  return finish(kind, Level::Environment, shifted_q(d, gamma, xi, tol),
                Conclusiveness::SufficientOnly, tol);
}

std::pair<CriterionResult, CriterionResult> steerability_both_parts(
    const Eigen::Ref<const Matrix>& v, const Partition& p, const Tolerances& tol) {
  return {state_criterion(v, CriterionKind::steerability(p, Part::One), tol),
          state_criterion(v, CriterionKind::steerability(p, Part::Two), tol)};
}

std::pair<CriterionResult, CriterionResult> steerability_both_parts(const GaussianDynamics& dyn,
                                                                    const Partition& p,
                                                                    const Tolerances& tol) {
  return {environment_criterion(dyn, CriterionKind::steerability(p, Part::One), tol),
          environment_criterion(dyn, CriterionKind::steerability(p, Part::Two), tol)};
}

}  // namespace gsteady
