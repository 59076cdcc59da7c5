#include "bloch/lattice.hpp"

#include <cmath>

namespace bloch {

namespace {
constexpr double kZeroTol = 1e-12;
constexpr double kPi = kTwoPi / 2.0;
}  // namespace

PlaneWaveSet::PlaneWaveSet(int order) : order_(order) {
  if (order < 0) throw std::invalid_argument("PlaneWaveSet: order must be >= 0");
  const int n = 2 * order + 1;
  modes_.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i1 = -order; i1 <= order; ++i1)
    for (int i2 = -order; i2 <= order; ++i2)
      for (int i3 = -order; i3 <= order; ++i3) modes_.emplace_back(i1, i2, i3);
}

int PlaneWaveSet::position(const IVec3& idx) const {
  if (!contains(idx)) throw std::out_of_range("PlaneWaveSet: index outside truncation");
  const int n = 2 * order_ + 1;
  return ((idx[0] + order_) * n + (idx[1] + order_)) * n + (idx[2] + order_);
}

bool PlaneWaveSet::contains(const IVec3& idx) const {
  return std::abs(idx[0]) <= order_ && std::abs(idx[1]) <= order_ &&
         std::abs(idx[2]) <= order_;
}

PlaneWaveSet build_index_set(int order) { return PlaneWaveSet(order); }

WaveVectorSplit::WaveVectorSplit(const Vec3& alpha0_, const Vec3& alpha_hat_,
                                 double tau_)
    : alpha0(alpha0_), alpha_hat(alpha_hat_), tau(tau_) {
  if (std::abs(alpha_hat.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("WaveVectorSplit: alpha_hat must be a unit vector");
  const Vec3 b = beta();
  for (int j = 0; j < 3; ++j)
    if (std::abs(b[j]) > kPi + 1e-12)
      throw std::invalid_argument(
          "WaveVectorSplit: beta must lie in the first Brillouin zone");
}

Vec3 gamma_of(const WaveVectorSplit& split, const Vec3& mode) {
  return split.beta() + mode;
}

Mat3c curl_matrix(const Vec3& g) {
  const Complex i(0.0, 1.0);
  Mat3c n;
  n << 0.0, -i * g[2], i * g[1],  //
      i * g[2], 0.0, -i * g[0],   //
      -i * g[1], i * g[0], 0.0;
  return n;
}

std::pair<Vec3, Vec3> polarization_basis(const Vec3& gamma) {
  const double norm = gamma.norm();
  if (norm <= kZeroTol) throw ZeroVector("polarization_basis: |gamma| <= 1e-12");
  const Vec3 ghat = gamma / norm;
  int axis = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(ghat[j]) < std::abs(ghat[axis])) axis = j;
  Vec3 e1 = Vec3::Unit(axis) - ghat[axis] * ghat;
  e1.normalize();
  const Vec3 e2 = ghat.cross(e1);
  return {e1, e2};
}

ModeAlgebra mode_algebra(const WaveVectorSplit& split, const Vec3& mode) {
  ModeAlgebra out;
  out.gamma = gamma_of(split, mode);
  out.curl_mat = curl_matrix(out.gamma);
  auto [e1, e2] = polarization_basis(out.gamma);
  out.pol1 = e1;
  out.pol2 = e2;
  return out;
}

HelmholtzParts helmholtz_split(const std::vector<Vec3c>& coeffs,
                               const WaveVectorSplit& split,
                               const PlaneWaveSet& basis) {
  if (static_cast<int>(coeffs.size()) != basis.size())
    throw std::invalid_argument("helmholtz_split: coefficient count mismatch");
  HelmholtzParts parts;
  parts.transverse.resize(coeffs.size());
  parts.gradient.resize(coeffs.size());
  for (int m = 0; m < basis.size(); ++m) {
    const Vec3 g = gamma_of(split, basis.mode(m));
    const double g2 = g.squaredNorm();
    if (g2 <= kZeroTol * kZeroTol)
      throw ZeroVector("helmholtz_split: gamma vanishes for a mode in range");
    const Complex along = (g[0] * coeffs[m][0] + g[1] * coeffs[m][1] +
                           g[2] * coeffs[m][2]) /
                          g2;
    parts.gradient[m] = along * g.cast<Complex>();
    parts.transverse[m] = coeffs[m] - parts.gradient[m];
  }
  return parts;
}

}  // namespace bloch
