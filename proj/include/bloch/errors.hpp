#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bloch {

/// Base class for all solver-level failures.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A vector that must be nonzero (a gamma vector, a candidate eigenvector)
/// has norm below the working threshold.
struct ZeroVector : SolverError {
  using SolverError::SolverError;
};

/// Quadrature grid violates the Nyquist bound for the requested
/// convolution order.
struct GridTooCoarse : SolverError {
  using SolverError::SolverError;
};

/// A difference index outside the stored convolution table was requested.
struct MissingCoefficient : SolverError {
  using SolverError::SolverError;
};

/// The operation requires a permittivity that does not depend on frequency.
struct NotFrequencyIndependent : SolverError {
  using SolverError::SolverError;
};

/// Dense eigensolver failed to converge or produced inconsistent output.
struct EigenFailure : SolverError {
  using SolverError::SolverError;
};

/// The system matrix A is numerically singular.
struct SingularA : SolverError {
  using SolverError::SolverError;
};

/// The shifted factor (A + shift*C) is numerically singular.
struct SingularFactor : SolverError {
  using SolverError::SolverError;
};

/// Arnoldi ran out of restarts before reaching the requested number of
/// converged Ritz pairs; `converged` reports how many were locked.
struct ArnoldiNoConvergence : SolverError {
  int converged;
  explicit ArnoldiNoConvergence(int k)
      : SolverError("Arnoldi failed to converge; locked " +
                    std::to_string(k) + " Ritz pairs"),
        converged(k) {}
};

/// No regularization shift tau yields a positive coercivity margin at
/// this frequency.
struct NoAdmissibleTau : SolverError {
  double omega;
  explicit NoAdmissibleTau(double w)
      : SolverError("no admissible tau at omega = " + std::to_string(w)),
        omega(w) {}
};

/// Path parameter outside the parametrized range.
struct OutOfRange : SolverError {
  using SolverError::SolverError;
};

/// A residual was requested for a (near-)zero vector.
struct NotAVector : SolverError {
  using SolverError::SolverError;
};

/// Problem dimension exceeds the supported dense-storage limit.
struct DimensionTooLarge : SolverError {
  using SolverError::SolverError;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bloch
