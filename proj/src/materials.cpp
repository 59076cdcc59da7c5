#include "bloch/materials.hpp"

#include <omp.h>

#include <cmath>
#include <random>

namespace bloch {

namespace {

double wrap_unit(double a) { return a - std::floor(a); }

/// Wrapped distance of a coordinate to the nearest lattice line.
double dist_to_lattice(double a) {
  const double f = wrap_unit(a);
  return std::min(f, 1.0 - f);
}

/// Signed minimum-image difference in [-1/2, 1/2).
double min_image(double a) {
  const double f = wrap_unit(a);
  return f >= 0.5 ? f - 1.0 : f;
}

const Vec3 kFccCenters[4] = {
    {0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};

Complex coating_value(const FccCoatedSpheres& fcc, double omega) {
  if (fcc.coating_frozen) return *fcc.coating_frozen;
  return Complex(lorentz_epsilon(fcc.coating, omega), 0.0);
}

Complex background_value(const PermittivityModel& model) {
  return std::visit(
      [](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Homogeneous>)
          return Complex(1.0, 0.0);
        else if constexpr (std::is_same_v<T, RodScaffold>)
          return Complex(1.0, 0.0);
        else
          return m.eps_background;
      },
      model.variant);
}

}  // namespace

double lorentz_epsilon(const LorentzParams& p, double omega) {
  const double nu = omega / kTwoPi;
  const double d = p.omega0 * p.omega0 - nu * nu;
  return p.eps1 + p.lambda * p.lambda * d /
                      (d * d + nu * nu * p.gamma0 * p.gamma0);
}

Complex eval_epsilon(const PermittivityModel& model, const Vec3& x, double omega) {
  return std::visit(
      [&](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Homogeneous>) {
          return m.eps;
        } else if constexpr (std::is_same_v<T, RodScaffold>) {
          const double half = 0.5 * m.rod_width;
          const double dx = dist_to_lattice(x[0]);
          const double dy = dist_to_lattice(x[1]);
          const double dz = dist_to_lattice(x[2]);
          const bool in_rod = (dy <= half && dz <= half) ||
                              (dx <= half && dz <= half) ||
                              (dx <= half && dy <= half);
          return in_rod ? m.eps_rod : Complex(1.0, 0.0);
        } else {
          const double r_cp = m.delta / (2.0 * std::sqrt(2.0));
          double r2_min = 1e30;
          for (const Vec3& c : kFccCenters) {
            const double ux = min_image(x[0] - c[0]);
            const double uy = min_image(x[1] - c[1]);
            const double uz = min_image(x[2] - c[2]);
            r2_min = std::min(r2_min, ux * ux + uy * uy + uz * uz);
          }
          const double r = std::sqrt(r2_min);
          if (r < 0.9 * r_cp) return m.eps_core;
          if (r <= r_cp) return coating_value(m, omega);
          return m.eps_background;
        }
      },
      model.variant);
}

bool frequency_dependent(const PermittivityModel& model) {
  if (const auto* fcc = std::get_if<FccCoatedSpheres>(&model.variant))
    return !fcc->coating_frozen.has_value();
  return false;
}

PermittivityModel freeze(const PermittivityModel& model, double omega) {
  PermittivityModel out = model;
  if (auto* fcc = std::get_if<FccCoatedSpheres>(&out.variant)) {
    if (!fcc->coating_frozen)
      fcc->coating_frozen = Complex(lorentz_epsilon(fcc->coating, omega), 0.0);
  }
  return out;
}

double min_re_inv_epsilon(const PermittivityModel& model, double omega,
                          int samples_per_axis) {
  const int n = samples_per_axis;
  double best = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 x((i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n);
        const Complex inv = 1.0 / eval_epsilon(model, x, omega);
        best = std::min(best, std::abs(inv.real()));
      }
  return best;
}

InvEpsilonTable::InvEpsilonTable(int order, double omega)
    : order_(order), omega_(omega) {
  if (order < 0) throw std::invalid_argument("InvEpsilonTable: order must be >= 0");
  const int n = 4 * order + 1;
  c_.assign(static_cast<std::size_t>(n) * n * n, Complex(0.0, 0.0));
}

Complex InvEpsilonTable::coeff(const IVec3& d) const {
  const int r = range();
  if (std::abs(d[0]) > r || std::abs(d[1]) > r || std::abs(d[2]) > r)
    throw MissingCoefficient("InvEpsilonTable: difference index out of range");
  const int n = 2 * r + 1;
  return c_[static_cast<std::size_t>((d[0] + r) * n + (d[1] + r)) * n +
            (d[2] + r)];
}

Complex& InvEpsilonTable::at(const IVec3& d) {
  const int r = range();
  if (std::abs(d[0]) > r || std::abs(d[1]) > r || std::abs(d[2]) > r)
    throw MissingCoefficient("InvEpsilonTable: difference index out of range");
  const int n = 2 * r + 1;
  return c_[static_cast<std::size_t>((d[0] + r) * n + (d[1] + r)) * n +
            (d[2] + r)];
}

double InvEpsilonTable::imag_norm() const {
  double m = 0.0;
  for (const Complex& v : c_) m = std::max(m, std::abs(v.imag()));
  return m;
}

namespace {

void check_quadrature_args(int order, int grid) {
  if (grid < 2 * (2 * order) + 2)
    throw GridTooCoarse("inv_epsilon_fourier: grid must be >= 4*order+2");
}

bool homogeneous_shortcut(const PermittivityModel& model, InvEpsilonTable& t) {
  if (const auto* h = std::get_if<Homogeneous>(&model.variant)) {
    t.at(IVec3(0, 0, 0)) = 1.0 / h->eps;
    return true;
  }
  return false;
}

/// Per-axis phase table: phase[j*(4N+1) + (d+2N)] = exp(-i 2*pi*d*(j+0.5)/G).
std::vector<Complex> phase_table(int order, int grid) {
  const int r = 2 * order, n = 4 * order + 1;
  std::vector<Complex> tab(static_cast<std::size_t>(grid) * n);
  for (int j = 0; j < grid; ++j) {
    const double x = (j + 0.5) / grid;
    for (int d = -r; d <= r; ++d)
      tab[static_cast<std::size_t>(j) * n + (d + r)] =
          std::polar(1.0, -kTwoPi * d * x);
  }
  return tab;
}

/// Accumulates one z-slab (fixed j1) into `acc`, using per-axis phases.
void accumulate_slab(const PermittivityModel& model, double omega, int order,
                     int grid, int j1, const std::vector<Complex>& phases,
                     std::vector<Complex>& acc) {
  const int r = 2 * order, n = 4 * order + 1;
  const double x1 = (j1 + 0.5) / grid;
  for (int j2 = 0; j2 < grid; ++j2) {
    const double x2 = (j2 + 0.5) / grid;
    for (int j3 = 0; j3 < grid; ++j3) {
      const Vec3 x(x1, x2, (j3 + 0.5) / grid);
      const Complex f = 1.0 / eval_epsilon(model, x, omega);
      const Complex* p1 = &phases[static_cast<std::size_t>(j1) * n];
      const Complex* p2 = &phases[static_cast<std::size_t>(j2) * n];
      const Complex* p3 = &phases[static_cast<std::size_t>(j3) * n];
      std::size_t idx = 0;
      for (int a = 0; a < n; ++a) {
        const Complex fa = f * p1[a];
        for (int b = 0; b < n; ++b) {
          const Complex fab = fa * p2[b];
          for (int c = 0; c < n; ++c, ++idx) acc[idx] += fab * p3[c];
        }
      }
    }
  }
}

}  // namespace

InvEpsilonTable inv_epsilon_fourier(const PermittivityModel& model, double omega,
                                    int order, int grid) {
  check_quadrature_args(order, grid);
  InvEpsilonTable table(order, omega);
  if (homogeneous_shortcut(model, table)) return table;

  const int r = 2 * order, n = 4 * order + 1;
  const std::size_t ncoef = static_cast<std::size_t>(n) * n * n;
  const auto phases = phase_table(order, grid);

  // One partial table per slab; summed in slab order afterwards so the
  // result does not depend on the thread count.
  std::vector<std::vector<Complex>> partial(grid);

#pragma omp parallel for schedule(dynamic)
  for (int j1 = 0; j1 < grid; ++j1) {
    partial[j1].assign(ncoef, Complex(0.0, 0.0));
    accumulate_slab(model, omega, order, grid, j1, phases, partial[j1]);
  }

  std::vector<Complex> sum(ncoef, Complex(0.0, 0.0));
  for (int j1 = 0; j1 < grid; ++j1)
    for (std::size_t i = 0; i < ncoef; ++i) sum[i] += partial[j1][i];

  const double w = 1.0 / (static_cast<double>(grid) * grid * grid);
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c)
        table.at(IVec3(a, b, c)) =
            w * sum[static_cast<std::size_t>((a + r) * n + (b + r)) * n + (c + r)];
  return table;
}

InvEpsilonTable inv_epsilon_fourier_serial(const PermittivityModel& model,
                                           double omega, int order, int grid) {
  check_quadrature_args(order, grid);
  InvEpsilonTable table(order, omega);
  if (homogeneous_shortcut(model, table)) return table;

  const int r = 2 * order;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c) {
        Complex acc(0.0, 0.0);
        for (int j1 = 0; j1 < grid; ++j1)
          for (int j2 = 0; j2 < grid; ++j2)
            for (int j3 = 0; j3 < grid; ++j3) {
              const Vec3 x((j1 + 0.5) / grid, (j2 + 0.5) / grid,
                           (j3 + 0.5) / grid);
              const double arg =
                  -kTwoPi * (a * x[0] + b * x[1] + c * x[2]);
              acc += std::polar(1.0, arg) / eval_epsilon(model, x, omega);
            }
        table.at(IVec3(a, b, c)) =
            acc / (static_cast<double>(grid) * grid * grid);
      }
  return table;
}

double air_fraction(const PermittivityModel& model, long samples) {
  if (samples < 10000)
    throw std::invalid_argument("air_fraction: needs at least 1e4 samples");
  const Complex bg = background_value(model);
  std::mt19937_64 rng(0x426c6f63u);  // fixed seed for reproducibility
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    const Vec3 x(uni(rng), uni(rng), uni(rng));
    if (eval_epsilon(model, x, 0.0) == bg) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

double rod_width_for_fill(double target_air) {
  if (!(target_air > 0.0 && target_air < 1.0)) {
    if (target_air == 1.0) return 0.0;
    if (target_air == 0.0) return 1.0;
    throw std::invalid_argument("rod_width_for_fill: target_air must be in (0,1)");
  }
  const double fill = 1.0 - target_air;  // 3t^2 - 2t^3, increasing on (0,1)
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double t = 0.5 * (lo + hi);
    (3.0 * t * t - 2.0 * t * t * t < fill ? lo : hi) = t;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bloch
