#pragma once

#include <vector>

#include "bloch/eigensolvers.hpp"

namespace bloch {

/// One straight segment of a Brillouin-zone path.
struct PathSegment {
  Vec3 start;
  Vec3 direction;  // unit
  double length;
  std::string from, to;
};

/// The built-in Gamma -> X -> M -> R path on the cubic cell, parametrized
/// by alpha in [0, 3*pi] with each segment of length pi.
struct PathSpec {
  std::vector<PathSegment> segments;
  int samples_per_segment = 20;

  static PathSpec cubic_gamma_x_m_r(int samples_per_segment = 20);
  double total_length() const;
  /// Segment index containing path coordinate alpha (boundaries go to the
  /// earlier segment except at alpha = 0).
  int segment_of(double alpha) const;
  Vec3 wavevector(double alpha) const;
};

/// k(alpha) on the built-in path: (alpha,0,0), then (pi,alpha-pi,0), then
/// (pi,pi,alpha-2*pi). Throws OutOfRange outside [0, 3*pi].
Vec3 path_wavevector(double alpha);

/// Regularization shift for a segment: tau = pi when alpha0 = 0, tau = 0
/// for alpha0 = (pi,0,0) or (pi,pi,0); otherwise a 64-point scan over
/// (-pi, pi] maximizing the admissibility margin. Throws NoAdmissibleTau
/// when the margin is not positive.
double tau_select(const Vec3& alpha0, const Vec3& alpha_hat, double omega,
                  const PermittivityModel& model);

struct TauChoice {
  double tau = 0.0;
  AdmissibilityReport report;
};

/// Same selection rule but reports a non-positive margin instead of
/// throwing; used by sweeps that flag inadmissible points and continue.
TauChoice tau_select_lenient(const Vec3& alpha0, const Vec3& alpha_hat,
                             double omega, const PermittivityModel& model);

}  // namespace bloch
