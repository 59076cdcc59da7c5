#include "bloch/path.hpp"

#include <cmath>

namespace bloch {

namespace {
constexpr double kPi = kTwoPi / 2.0;
}

PathSpec PathSpec::cubic_gamma_x_m_r(int samples_per_segment) {
  PathSpec p;
  p.samples_per_segment = samples_per_segment;
  p.segments = {
      {{0, 0, 0}, {1, 0, 0}, kPi, "Gamma", "X"},
      {{kPi, 0, 0}, {0, 1, 0}, kPi, "X", "M"},
      {{kPi, kPi, 0}, {0, 0, 1}, kPi, "M", "R"},
  };
  return p;
}

double PathSpec::total_length() const {
  double l = 0.0;
  for (const auto& s : segments) l += s.length;
  return l;
}

int PathSpec::segment_of(double alpha) const {
  if (alpha < 0.0 || alpha > total_length() + 1e-12)
    throw OutOfRange("PathSpec: alpha outside path range");
  double acc = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    acc += segments[i].length;
    if (alpha <= acc || i + 1 == segments.size()) return static_cast<int>(i);
  }
  return static_cast<int>(segments.size()) - 1;
}

Vec3 PathSpec::wavevector(double alpha) const {
  const int si = segment_of(alpha);
  double offset = 0.0;
  for (int i = 0; i < si; ++i) offset += segments[i].length;
  return segments[si].start + (alpha - offset) * segments[si].direction;
}

Vec3 path_wavevector(double alpha) {
  if (alpha < 0.0 || alpha > 3.0 * kPi)
    throw OutOfRange("path_wavevector: alpha must lie in [0, 3*pi]");
  if (alpha <= kPi) return Vec3(alpha, 0.0, 0.0);
  if (alpha <= 2.0 * kPi) return Vec3(kPi, alpha - kPi, 0.0);
  return Vec3(kPi, kPi, alpha - 2.0 * kPi);
}

namespace {

bool near(const Vec3& a, double x, double y, double z) {
  return std::abs(a[0] - x) < 1e-14 && std::abs(a[1] - y) < 1e-14 &&
         std::abs(a[2] - z) < 1e-14;
}

TauChoice tau_select_impl(const Vec3& alpha0, const Vec3& alpha_hat,
                          double omega, const PermittivityModel& model) {
  TauChoice choice;
  if (near(alpha0, 0, 0, 0)) {
    choice.tau = kPi;
  } else if (near(alpha0, kPi, 0, 0) || near(alpha0, kPi, kPi, 0)) {
    choice.tau = 0.0;
  } else {
    // Scan tau over (-pi, pi], keeping beta inside the Brillouin zone,
    // and take the largest admissibility margin.
    double best_margin = -1e300;
    double best_tau = 0.0;
    bool found = false;
    for (int i = 1; i <= 64; ++i) {
      const double tau = -kPi + kTwoPi * i / 64.0;
      const Vec3 beta = alpha0 + tau * alpha_hat;
      if (std::abs(beta[0]) > kPi || std::abs(beta[1]) > kPi ||
          std::abs(beta[2]) > kPi)
        continue;
      const auto rep =
          check_admissibility(WaveVectorSplit(alpha0, alpha_hat, tau), omega, model);
      if (rep.margin > best_margin) {
        best_margin = rep.margin;
        best_tau = tau;
        found = true;
      }
    }
    if (!found) throw NoAdmissibleTau(omega);
    choice.tau = best_tau;
  }
  choice.report = check_admissibility(
      WaveVectorSplit(alpha0, alpha_hat, choice.tau), omega, model);
  return choice;
}

}  // namespace

double tau_select(const Vec3& alpha0, const Vec3& alpha_hat, double omega,
                  const PermittivityModel& model) {
  const TauChoice c = tau_select_impl(alpha0, alpha_hat, omega, model);
  if (!c.report.ok) throw NoAdmissibleTau(omega);
  return c.tau;
}

TauChoice tau_select_lenient(const Vec3& alpha0, const Vec3& alpha_hat,
                             double omega, const PermittivityModel& model) {
  return tau_select_impl(alpha0, alpha_hat, omega, model);
}

}  // namespace bloch
