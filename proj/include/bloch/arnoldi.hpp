#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "bloch/errors.hpp"

namespace bloch {

struct RitzPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
  double residual;  // true residual |apply(x) - theta x| / max(1, |theta|)
};

struct ArnoldiResult {
  std::vector<RitzPair> pairs;
  bool exhausted_subspace = false;  // operator ran out of nonzero directions
  int restarts_used = 0;
};

using ApplyFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Restarted Arnoldi iteration for the largest-magnitude eigenvalues of a
/// linear operator given by its action. Modified Gram-Schmidt with one
/// re-orthogonalization pass; converged Ritz vectors are locked and
/// deflated from later restarts. A Ritz pair is accepted when its Krylov
/// residual estimate is below tol*|theta| and the recomputed true
/// residual confirms it. Eigenvalues indistinguishable from zero are
/// never reported. The start vector is pseudorandom with a fixed seed,
/// so results are reproducible.
///
/// Throws ArnoldiNoConvergence when the restart budget is exhausted
/// before nev pairs are locked; returns early with exhausted_subspace
/// set when the operator has fewer than nev nonzero eigenvalues.
ArnoldiResult arnoldi(const ApplyFn& apply, int dim, int subspace, int nev,
                      double tol, int max_restarts);

}  // namespace bloch
