#pragma once

#include <stdexcept>
#include <string>

namespace gsteady {

// Input has the wrong shape, violates a stated precondition, or names an
// unknown entity.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The drift matrix is not asymptotically stable (or only marginally so).
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double spectral_abscissa)
      : std::runtime_error(what), spectral_abscissa_(spectral_abscissa) {}
  double spectral_abscissa() const { return spectral_abscissa_; }

 private:
  double spectral_abscissa_;
};

// A (Gamma, D) pair whose Upsilon matrix is not positive semidefinite, so no
// Lindblad dissipator realizes it.
class RealizabilityError : public std::runtime_error {
 public:
  RealizabilityError(const std::string& what, double offending_eigenvalue)
      : std::runtime_error(what), offending_eigenvalue_(offending_eigenvalue) {}
  double offending_eigenvalue() const { return offending_eigenvalue_; }

 private:
  double offending_eigenvalue_;
};

// A numerical routine finished but its result failed a self-check.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsteady
