#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bloch/lattice.hpp"

namespace bloch {

/// Single-resonance dispersion for the sphere coating:
///   eps(omega) = eps1 + lambda^2 (nu0^2 - nu^2) / ((nu0^2 - nu^2)^2 + nu^2 g0^2)
/// with nu = omega / 2*pi. Purely real for these parameters.
struct LorentzParams {
  double eps1 = 7.0;
  double omega0 = 0.489;  // resonance, in omega/2pi units
  double gamma0 = 0.3;    // damping width
  double lambda = 1.3784048752090222;  // coupling amplitude, sqrt(1.9)
};

double lorentz_epsilon(const LorentzParams& p, double omega);

/// Spatially constant permittivity.
struct Homogeneous {
  Complex eps{1.0, 0.0};
};

/// Three mutually orthogonal square-cross-section rods along the cell
/// edges (a scaffold), surrounded by air (eps = 1). rod_width is the full
/// side of the square cross section; a point is inside a rod when its two
/// transverse coordinates are within rod_width/2 of a cell-edge line in
/// the wrapped sup-norm.
struct RodScaffold {
  Complex eps_rod{13.0, 0.0};
  double rod_width = 0.27057;
};

/// Face-centered cubic arrangement of coated spheres in the unit cubic
/// cell (centers at the corners and face centers; 4 spheres per cell).
/// Sphere radius r_cp = delta/(2*sqrt(2)); the core fills radius
/// 0.9*r_cp and the coating the shell up to r_cp. The coating is
/// dispersive unless coating_frozen pins it to a constant.
struct FccCoatedSpheres {
  double delta = 0.9;
  Complex eps_core{2.534464, 0.0};  // 1.592^2
  LorentzParams coating{};
  Complex eps_background{1.0, 0.0};
  std::optional<Complex> coating_frozen{};
};

struct PermittivityModel {
  std::variant<Homogeneous, RodScaffold, FccCoatedSpheres> variant;
  std::string id = "unnamed";
};

/// eps(x, omega); x is wrapped into [0,1)^3, so evaluation is exactly
/// 1-periodic.
Complex eval_epsilon(const PermittivityModel& model, const Vec3& x, double omega);

bool frequency_dependent(const PermittivityModel& model);

/// Copy of the model with any dispersive part pinned to its value at
/// `omega`; the result is frequency independent.
PermittivityModel freeze(const PermittivityModel& model, double omega);

/// inf_x |Re(1/eps(x, omega))| by dense midpoint sampling
/// (samples_per_axis^3 points, deterministic).
double min_re_inv_epsilon(const PermittivityModel& model, double omega,
                          int samples_per_axis = 16);

/// Fourier coefficients of 1/eps(., omega):
///   coeff(d) = integral over the unit cell of (1/eps) exp(-i 2*pi*d . x)
/// for every difference index |d_j| <= 2*order.
class InvEpsilonTable {
 public:
  InvEpsilonTable(int order, double omega);

  int order() const { return order_; }
  double omega() const { return omega_; }
  int range() const { return 2 * order_; }

  Complex coeff(const IVec3& d) const;
  Complex& at(const IVec3& d);

  /// Max |Im coeff| over the table; ~0 for real-valued eps.
  double imag_norm() const;

 private:
  int order_;
  double omega_;
  std::vector<Complex> c_;
};

/// Midpoint-rule quadrature of the 1/eps coefficients on a grid^3 lattice.
/// Requires grid >= 2*(2*order)+2 (Nyquist for the needed differences);
/// a Homogeneous model bypasses quadrature. The default entry point runs
/// the OpenMP slab kernel; the serial variant is the reference kept for
/// testing and benchmarking.
InvEpsilonTable inv_epsilon_fourier(const PermittivityModel& model, double omega,
                                    int order, int grid);
InvEpsilonTable inv_epsilon_fourier_serial(const PermittivityModel& model,
                                           double omega, int order, int grid);

/// Monte-Carlo estimate (fixed seed) of the volume fraction where eps
/// equals the model's background value.
double air_fraction(const PermittivityModel& model, long samples);

/// Rod width t solving 3t^2 - 2t^3 = 1 - target_air by bisection.
double rod_width_for_fill(double target_air);

}  // namespace bloch
