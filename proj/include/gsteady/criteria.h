#pragma once

// Bona-fide relations of the form V + Xi >= 0, checked either on a covariance
// matrix (state level) or on the drift/diffusion pair that produces it
// (environment level).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsteady/lindblad_model.h"
#include "gsteady/numerics.h"

namespace gsteady {

/// Bipartition n = n1 + n2. Part two is the listed set of 0-based mode
/// indices; it must be a non-empty proper subset of the modes.
class Partition {
 public:
  Partition(int n, std::vector<int> part_two);

  /// Part two = {n-1} (the last mode).
  static Partition last_mode(int n);

  int modes() const { return n_; }
  const std::vector<int>& part_two() const { return part_two_; }
  std::vector<int> part_one() const;
  bool in_part_two(int mode) const;

 private:
  int n_;
  std::vector<int> part_two_;
};

enum class CriterionType { Uncertainty, Classicality, Separability, Steerability };
enum class Part { One, Two };

struct CriterionKind {
  CriterionType type = CriterionType::Uncertainty;
  std::optional<Partition> partition;
  // For Steerability: the part whose state would be steered by local
  // Gaussian measurements on the other part.
  Part steered = Part::One;

  static CriterionKind uncertainty() { return {CriterionType::Uncertainty, std::nullopt, Part::One}; }
  static CriterionKind classicality() { return {CriterionType::Classicality, std::nullopt, Part::One}; }
  static CriterionKind separability(Partition p) { return {CriterionType::Separability, std::move(p), Part::One}; }
  static CriterionKind steerability(Partition p, Part steered) {
    return {CriterionType::Steerability, std::move(p), steered};
  }

  std::string name() const;
};

enum class Level { State, Environment };
enum class Verdict { Holds, Violated, Marginal };
enum class Conclusiveness { IffCondition, SufficientOnly };

const char* to_string(Level l);
const char* to_string(Verdict v);
const char* to_string(Conclusiveness c);

struct CriterionResult {
  CriterionKind kind;
  Level level = Level::State;
  CMatrix tested_matrix;
  Vector spectrum;
  InertiaIndex inertia;
  Verdict verdict = Verdict::Holds;
  Conclusiveness conclusiveness = Conclusiveness::IffCondition;
  // Human-readable conclusion, e.g. "entangled", "inconclusive".
  std::string label;

  /// A sufficient-only test that failed says nothing about the property.
  bool inconclusive() const {
    return conclusiveness == Conclusiveness::SufficientOnly && verdict == Verdict::Violated;
  }
  double min_eigenvalue() const { return spectrum.size() ? spectrum.minCoeff() : 0.0; }
};

/// Diagonal sign flip of the momenta of part two (local time inversion).
Matrix time_inversion(const Partition& p);

/// Hermitian Xi for each relation: iJ, -I, i T J T, or i Pi with Pi = J
/// restricted to the steered part, i.e. 1/2 (J + T J T) with T flipping the
/// measuring part.
CMatrix xi_matrix(const CriterionKind& kind, int n);

/// Tests V + Xi >= 0; always an iff verdict.
CriterionResult state_criterion(const Eigen::Ref<const Matrix>& v, const CriterionKind& kind,
                                const Tolerances& tol = {});

/// Tests D~_[Xi] = D - (Xi Gamma + Gamma Xi) when Gamma is symmetric (iff),
/// otherwise D_[Xi] = D - Xi Gamma^T - Gamma Xi (sufficient only). The
/// Uncertainty relation is always an iff and always holds; its tested matrix
/// is checked against 2 conj(Upsilon).
CriterionResult environment_criterion(const GaussianDynamics& dyn, const CriterionKind& kind,
                                      const Tolerances& tol = {});

/// (steering of part one, steering of part two).
std::pair<CriterionResult, CriterionResult> steerability_both_parts(
    const Eigen::Ref<const Matrix>& v, const Partition& p, const Tolerances& tol = {});
std::pair<CriterionResult, CriterionResult> steerability_both_parts(
    const GaussianDynamics& dyn, const Partition& p, const Tolerances& tol = {});

bool is_symmetric(const Eigen::Ref<const Matrix>& m, const Tolerances& tol);

}  // namespace gsteady
