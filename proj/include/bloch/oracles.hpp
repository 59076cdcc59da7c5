#pragma once

#include "bloch/sweep.hpp"

namespace bloch::oracles {

// Independent brute-force and analytic checks used by tests and the
// `validate` subcommand. No production solver path depends on anything
// in this namespace.

struct OmegaMult {
  double omega;
  int multiplicity;
};

/// Dispersion of a homogeneous medium: omega = |k + I| / sqrt(eps) per
/// mode, each with the two transverse polarizations; merged and sorted.
std::vector<OmegaMult> analytic_omegas(double eps, const Vec3& k,
                                       const PlaneWaveSet& basis);

struct EtaRoot {
  Complex eta;
  int multiplicity;
};

/// Roots of the per-mode dispersion quadratic
///   eta^2 + 2 eta (alpha_hat . gamma^I) + |gamma^I|^2 - eps*omega^2 = 0,
/// real or complex, multiplicity 2 each.
std::vector<EtaRoot> analytic_etas(double eps, double omega,
                                   const WaveVectorSplit& split,
                                   const PlaneWaveSet& basis);

struct GeneralizedSpectrum {
  std::vector<Complex> finite;      // eta values of A X = -eta C X
  Eigen::MatrixXcd finite_vectors;  // matching right eigenvectors
  int infinite_count = 0;
};

/// Full pencil spectrum by direct reduction (LAPACK zggev); infinite
/// eigenvalues are counted, not returned. Throws DimensionTooLarge above
/// dim 500.
GeneralizedSpectrum dense_generalized_eig(const Eigen::MatrixXcd& a,
                                          const Eigen::MatrixXcd& c);

/// Residual of the quadratic mixed problem for a candidate
/// (u1, p, s, eta), assembled here with its own loops, stacked as
/// (rows v, rows q, row t).
Eigen::VectorXcd quadratic_residual_vector(const PlaneWaveSet& basis,
                                           const WaveVectorSplit& split,
                                           double omega,
                                           const InvEpsilonTable& table,
                                           const Eigen::VectorXcd& u1,
                                           const Eigen::VectorXcd& p, Complex s,
                                           Complex eta);

double quadratic_residual(const PlaneWaveSet& basis,
                          const WaveVectorSplit& split, double omega,
                          const InvEpsilonTable& table,
                          const Eigen::VectorXcd& u1, const Eigen::VectorXcd& p,
                          Complex s, Complex eta);

struct CrossEntry {
  double alpha;
  int band;
  double omega;
  double k_deviation;  // min over accepted pairs of |k_computed - k|_inf
};

struct CrossReport {
  std::vector<CrossEntry> entries;
  double max_deviation = 0.0;
};

struct CrossOptions {
  int grid = 64;
  int nev_quad = 8;
  double omega_floor = 1e-9;
  int dense_dim_limit = 400;
};

/// Round trip standard -> quadratic at sampled path points of a
/// frequency-independent model.
CrossReport cross_consistency_report(const PermittivityModel& model,
                                     const PlaneWaveSet& basis,
                                     const std::vector<double>& alpha_samples,
                                     int nev, const CrossOptions& opts = {});

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// The fixed oracle suite behind the `validate` subcommand.
std::vector<CheckResult> run_validation_suite();

}  // namespace bloch::oracles
