#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>
#include <memory>
#include <string>
#include <vector>

#include "bloch/arnoldi.hpp"
#include "bloch/assembly.hpp"

namespace bloch {

/// Coercivity pre-flight for the quadratic solver at (beta, omega, eps):
/// margin = inf_x |Re(1/eps)| * min_I |gamma^I|^2 - omega^2, with the
/// minimum taken in closed form over all of Z^3 (not just the truncated
/// set). case_label records which of the canonical alpha0 cases applied:
/// 'a' alpha0 = 0, 'b' alpha0 = (pi,0,0), 'c' alpha0 = (pi,pi,0),
/// 'g' anything else; case_threshold is the corresponding closed-form
/// lower bound on min|gamma|^2 (equal to min_gamma_sq for 'b' and 'c',
/// and for 'a' whenever |tau| <= pi).
struct AdmissibilityReport {
  bool ok = false;
  double margin = 0.0;
  double inf_re_inv_eps = 0.0;
  double min_gamma_sq = 0.0;
  IVec3 limiting_mode{0, 0, 0};
  char case_label = 'g';
  double case_threshold = 0.0;
};

AdmissibilityReport check_admissibility(const WaveVectorSplit& split,
                                        double omega,
                                        const PermittivityModel& model);

// ---------------------------------------------------------------------------
// Standard solver: fix k, compute omega^2 on the divergence-free subspace.

struct StandardOptions {
  int grid = 64;
  double neg_tol = 1e-9;
  const InvEpsilonTable* table = nullptr;  // reuse a prebuilt table
};

struct StandardMode {
  double omega_sq;
  double omega;
  Eigen::VectorXcd reduced;  // 2m polarization coefficients
};

std::vector<StandardMode> solve_standard(const Vec3& k,
                                         const PermittivityModel& model,
                                         const PlaneWaveSet& basis, int nev,
                                         const StandardOptions& opts = {});

/// Per-mode C^3 coefficients of a reduced (polarization) vector.
std::vector<Vec3c> expand_transverse(const Eigen::VectorXcd& reduced,
                                     const Vec3& k, const PlaneWaveSet& basis);

// ---------------------------------------------------------------------------
// Quadratic solver: fix omega, compute eta from the linearized pencil.

enum class SolveMethod { Auto, Dense, Arnoldi };

struct QuadraticOptions {
  SolveMethod method = SolveMethod::Auto;
  Complex shift{0.0, 0.0};  // Arnoldi spectral-transformation center
  double M = 1.0;
  int grid = 64;
  double accept_tol = 1e-8;  // residual bound for accepting a pair
  double diag_tol = 1e-8;    // multiplier / u2-gap bound
  double im_tol = 1e-6;      // |Im lambda| beyond which a pair is flagged
  double path_margin = 0.25;  // Re lambda window is [-margin, pi+margin]
  double arnoldi_tol = 1e-10;
  int subspace = 0;  // 0 -> max(2*nev+12, 36)
  int max_restarts = 60;
  int dense_dim_limit = 2500;  // Auto uses Arnoldi above this dimension
  bool require_admissible = false;
  const InvEpsilonTable* table = nullptr;  // reuse a prebuilt table
};

struct EtaEigenpair {
  Complex eta;
  Complex lambda;  // eta + tau
  Vec3c k;         // alpha0 + lambda*alpha_hat
  FieldCoefficients fields;
  double residual;
  double u1_norm;  // under |X| = 1 normalization
  double p_norm;
  double s_abs;
  double u2_gap;  // |u2 - eta*u1| / |u1|
  bool physical;  // real lambda inside the segment window
  std::string flag;
};

struct QuadraticSolveResult {
  std::vector<EtaEigenpair> pairs;  // accepted pairs, sorted
  AdmissibilityReport admissibility;
  double tau_used = 0.0;
  bool tau_perturbed = false;
  int rejected = 0;  // pencil pairs failing residual/diagnostic acceptance
};

QuadraticSolveResult solve_quadratic_eta(double omega,
                                         const WaveVectorSplit& split,
                                         const PermittivityModel& model,
                                         const PlaneWaveSet& basis, int nev,
                                         const QuadraticOptions& opts = {});

/// Spectral transformation x -> -(A + shift*C)^{-1} C x.
class ShiftInvertOperator {
 public:
  ShiftInvertOperator(const MixedBlockSystem& system, Complex shift);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Complex shift() const { return shift_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  const Eigen::MatrixXcd* c_;
  Complex shift_;
};

/// |(A + eta C) X| / |X|; throws NotAVector for zero X.
double residual(const MixedBlockSystem& system, Complex eta,
                const Eigen::VectorXcd& x);

}  // namespace bloch
