#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "bloch/errors.hpp"

namespace bloch {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;
using IVec3 = Eigen::Vector3i;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Truncated Fourier index set on the unit cubic cell: all reciprocal
/// vectors I = 2*pi*(i1,i2,i3) with |i_j| <= order, listed
/// lexicographically in (i1,i2,i3) so that matrix layouts are
/// reproducible across runs.
class PlaneWaveSet {
 public:
  explicit PlaneWaveSet(int order);

  int order() const { return order_; }
  int size() const { return static_cast<int>(modes_.size()); }

  /// Integer triple (i1,i2,i3) of mode m.
  const IVec3& index(int m) const { return modes_[m]; }

  /// Reciprocal vector I = 2*pi*(i1,i2,i3) of mode m.
  Vec3 mode(int m) const { return kTwoPi * modes_[m].cast<double>(); }

  /// Position of an integer triple in the lexicographic list.
  int position(const IVec3& idx) const;
  bool contains(const IVec3& idx) const;

 private:
  int order_;
  std::vector<IVec3> modes_;
};

PlaneWaveSet build_index_set(int order);

/// Wave-vector split k = beta + eta*alpha_hat with beta = alpha0 +
/// tau*alpha_hat. alpha_hat must be a unit vector and beta must stay in
/// the first Brillouin zone [-pi,pi]^3.
struct WaveVectorSplit {
  Vec3 alpha0;
  Vec3 alpha_hat;
  double tau;

  WaveVectorSplit(const Vec3& alpha0_, const Vec3& alpha_hat_, double tau_);

  Vec3 beta() const { return alpha0 + tau * alpha_hat; }
};

/// gamma^I = beta + I.
Vec3 gamma_of(const WaveVectorSplit& split, const Vec3& mode);

/// The per-mode curl matrix N = i * cross(gamma): curl_beta acts on the
/// coefficient of mode I as multiplication by this matrix. N*gamma = 0
/// holds exactly in structure.
Mat3c curl_matrix(const Vec3& gamma);

/// Two orthonormal real vectors spanning the plane perpendicular to
/// gamma. Deterministic: starts Gram-Schmidt from the coordinate axis
/// least aligned with gamma (lowest index on ties). Throws ZeroVector
/// when |gamma| <= 1e-12.
std::pair<Vec3, Vec3> polarization_basis(const Vec3& gamma);

/// Per-mode bundle of the shifted-operator algebra.
struct ModeAlgebra {
  Vec3 gamma;
  Mat3c curl_mat;
  Vec3 pol1, pol2;
};

ModeAlgebra mode_algebra(const WaveVectorSplit& split, const Vec3& mode);

/// Mode-wise Helmholtz decomposition: coeffs = transverse + gradient with
/// gamma . transverse = 0 and gradient parallel to gamma. Requires every
/// gamma^I to be nonzero.
struct HelmholtzParts {
  std::vector<Vec3c> transverse;
  std::vector<Vec3c> gradient;
};

HelmholtzParts helmholtz_split(const std::vector<Vec3c>& coeffs,
                               const WaveVectorSplit& split,
                               const PlaneWaveSet& basis);

}  // namespace bloch
