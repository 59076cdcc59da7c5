#pragma once

#include <optional>

#include "bloch/path.hpp"

namespace bloch {

/// One computed point of the Bloch variety.
struct BandPoint {
  double alpha = 0.0;
  Vec3 k{0, 0, 0};
  double omega = 0.0;  // angular; outputs report omega/2pi
  bool has_eta = false;
  Complex eta{0.0, 0.0};
  enum class Source { Standard, Quadratic } source = Source::Standard;
  double residual = 0.0, p_norm = 0.0, s_abs = 0.0;
  std::string flag = "ok";
};

struct SweepOptions {
  int grid = 64;
  SolveMethod method = SolveMethod::Auto;
  Complex shift{0.0, 0.0};
  double M = 1.0;
  double accept_tol = 1e-8;
  double diag_tol = 1e-8;
  double im_tol = 1e-6;
  double path_margin = 0.25;
  double arnoldi_tol = 1e-10;
  int subspace = 0;
  int max_restarts = 60;
  int dense_dim_limit = 2500;
};

struct TauPolicy {
  bool fixed = false;
  double tau = 0.0;  // used when fixed
};

struct SweepResult {
  std::vector<BandPoint> points;
  /// alpha values skipped because k hit the reciprocal lattice (the
  /// polarization reduction needs gamma != 0 for every mode).
  std::vector<double> skipped_alphas;
  /// (omega, reason) for quadratic sweep points that failed to solve.
  std::vector<std::pair<double, std::string>> failures;
};

/// Standard sweep: one fixed-k solve per alpha sample along the path.
SweepResult sweep_standard(const PermittivityModel& model,
                           const PlaneWaveSet& basis, const PathSpec& path,
                           int nbands, const SweepOptions& opts = {});

/// Quadratic sweep over a frequency grid on one path segment: for each
/// omega, pick tau by policy, solve for eta, and map accepted real-lambda
/// pairs to the segment's alpha coordinate. Per-omega failures are
/// recorded and the sweep continues.
SweepResult sweep_quadratic(const PermittivityModel& model,
                            const PlaneWaveSet& basis, const PathSpec& path,
                            int segment_index,
                            const std::vector<double>& omega_grid,
                            const TauPolicy& tau_policy, int nev,
                            const SweepOptions& opts = {});

struct ConvergenceRow {
  int order;
  int dofs;
  double rel_err;
  Vec3 k_computed;
};

/// Fixed-omega wave-vector error against a reference point, per basis
/// order. The nearest accepted real-lambda pair to k_ref is used.
std::vector<ConvergenceRow> convergence_study(const PermittivityModel& model,
                                              const Vec3& k_ref,
                                              double omega_ref,
                                              const std::vector<int>& orders,
                                              const SweepOptions& opts = {});

}  // namespace bloch
