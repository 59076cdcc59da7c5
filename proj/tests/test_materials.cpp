#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "bloch/materials.hpp"
#include "doctest.h"

using namespace bloch;

namespace {

PermittivityModel homogeneous(Complex eps) {
  return {Homogeneous{eps}, "hom"};
}

PermittivityModel rods(double width = 0.27057) {
  return {RodScaffold{Complex(13.0, 0.0), width}, "rods"};
}

PermittivityModel fcc() { return {FccCoatedSpheres{}, "fcc"}; }

}  // namespace

TEST_CASE("lorentz_epsilon anchor values") {
  const LorentzParams p;
  // numerator vanishes at resonance
  CHECK(lorentz_epsilon(p, kTwoPi * 0.489) == 7.0);
  // static limit 7 + 1.9/0.489^2
  const double expect0 = 7.0 + 1.9 / (0.489 * 0.489);
  CHECK(lorentz_epsilon(p, 0.0) == doctest::Approx(expect0).epsilon(1e-14));
  CHECK(lorentz_epsilon(p, 0.0) == doctest::Approx(14.9458).epsilon(1e-4));
  // high-frequency limit back to eps1
  CHECK(lorentz_epsilon(p, kTwoPi * 1e6) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("lorentz_epsilon stays bounded below on the working range") {
  const LorentzParams p;
  double lo = 1e300;
  for (int i = 0; i <= 20000; ++i) {
    const double nu = 2.0 * i / 20000.0;
    lo = std::min(lo, lorentz_epsilon(p, kTwoPi * nu));
  }
  CHECK(lo >= 0.5);
}

TEST_CASE("eval_epsilon geometry") {
  CHECK(eval_epsilon(homogeneous(13.0), Vec3(0.3, 0.9, 0.1), 0.7) ==
        Complex(13.0, 0.0));

  const auto rd = rods(0.2706);
  // cell center is air for t < 0.5
  CHECK(eval_epsilon(rd, Vec3(0.5, 0.5, 0.5), 0.0) == Complex(1.0, 0.0));
  // on the x-edge line
  CHECK(eval_epsilon(rd, Vec3(0.4, 0.0, 0.0), 0.0) == Complex(13.0, 0.0));
  // wrapped: near the far corner still inside the scaffold
  CHECK(eval_epsilon(rd, Vec3(0.99, 0.99, 0.5), 0.0) == Complex(13.0, 0.0));

  const auto f = fcc();
  const double r_cp = 0.9 / (2.0 * std::sqrt(2.0));
  // sphere centers carry the core value 1.592^2
  CHECK(eval_epsilon(f, Vec3(0, 0, 0), 0.3) == Complex(2.534464, 0.0));
  CHECK(eval_epsilon(f, Vec3(0.5, 0.5, 0.0), 0.3) == Complex(2.534464, 0.0));
  // mid-shell radius gets the coating value
  const Vec3 shell(0.95 * r_cp, 0.0, 0.0);
  CHECK(eval_epsilon(f, shell, 0.0).real() ==
        doctest::Approx(lorentz_epsilon(LorentzParams{}, 0.0)));
  // far from all spheres: background
  CHECK(eval_epsilon(f, Vec3(0.5, 0.25, 0.25), 0.3) == Complex(1.0, 0.0));
}

TEST_CASE("eval_epsilon is exactly 1-periodic") {
  const auto rd = rods();
  const auto f = fcc();
  for (int i = 0; i < 200; ++i) {
    // dyadic points so x+1 is exactly representable
    const Vec3 x((i * 37 % 1024) / 1024.0, (i * 101 % 1024) / 1024.0,
                 (i * 59 % 1024) / 1024.0);
    for (const auto& m : {rd, f}) {
      const Complex a = eval_epsilon(m, x, 0.4);
      CHECK(eval_epsilon(m, x + Vec3(1, 0, 0), 0.4) == a);
      CHECK(eval_epsilon(m, x - Vec3(0, 2, 0), 0.4) == a);
      CHECK(eval_epsilon(m, x + Vec3(0, 0, 3), 0.4) == a);
    }
  }
}

TEST_CASE("rod_width_for_fill") {
  CHECK(rod_width_for_fill(1.0) == 0.0);
  const double t82 = rod_width_for_fill(0.82);
  CHECK(3 * t82 * t82 - 2 * t82 * t82 * t82 ==
        doctest::Approx(0.18).epsilon(1e-9));
  CHECK(t82 == doctest::Approx(0.27057).epsilon(1e-4));
  const double t50 = rod_width_for_fill(0.5);
  CHECK(3 * t50 * t50 - 2 * t50 * t50 * t50 ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(t50 == doctest::Approx(0.4534).epsilon(1e-3));
}

TEST_CASE("air_fraction") {
  CHECK(air_fraction(homogeneous(13.0), 20000) == 0.0);
  CHECK(air_fraction(homogeneous(1.0), 20000) == 1.0);
  CHECK_THROWS_AS(air_fraction(homogeneous(1.0), 100), std::invalid_argument);

  const double t = rod_width_for_fill(0.82);
  CHECK(air_fraction(rods(t), 200000) == doctest::Approx(0.82).epsilon(0.0062));

  // 4 disjoint spheres of radius 0.9/(2 sqrt 2) per cell
  const double r = 0.9 / (2.0 * std::sqrt(2.0));
  const double air = 1.0 - 4.0 * (4.0 / 3.0) * (kTwoPi / 2.0) * r * r * r;
  CHECK(air_fraction(fcc(), 200000) == doctest::Approx(air).epsilon(0.0062));
}

TEST_CASE("inv_epsilon_fourier homogeneous bypass") {
  const auto t = inv_epsilon_fourier(homogeneous(Complex(13.0, 0.0)), 0.0, 2, 12);
  CHECK(t.coeff(IVec3(0, 0, 0)) == Complex(1.0 / 13.0, 0.0));
  int nonzero = 0;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c)
        if (std::abs(t.coeff(IVec3(a, b, c))) > 0.0) ++nonzero;
  CHECK(nonzero == 1);
}

TEST_CASE("inv_epsilon_fourier preconditions and lookup range") {
  CHECK_THROWS_AS(inv_epsilon_fourier(rods(), 0.0, 2, 9), GridTooCoarse);
  const auto t = inv_epsilon_fourier(rods(), 0.0, 1, 8);
  CHECK_THROWS_AS(t.coeff(IVec3(3, 0, 0)), MissingCoefficient);
  CHECK_NOTHROW(t.coeff(IVec3(2, -2, 1)));
}

TEST_CASE("rod coeff(0) equals the grid-counted volume average exactly") {
  const int grid = 32;
  const auto model = rods(rod_width_for_fill(0.82));
  const auto t = inv_epsilon_fourier(model, 0.0, 1, grid);
  // independent point count over the same midpoint lattice
  long in_rod = 0;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      for (int c = 0; c < grid; ++c)
        if (eval_epsilon(model,
                         Vec3((a + 0.5) / grid, (b + 0.5) / grid,
                              (c + 0.5) / grid),
                         0.0) == Complex(13.0, 0.0))
          ++in_rod;
  const double frac = static_cast<double>(in_rod) / (grid * grid * grid);
  const double expect = (1.0 - frac) + frac / 13.0;
  CHECK(t.coeff(IVec3(0, 0, 0)).real() ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(t.coeff(IVec3(0, 0, 0)).imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("rod coeff(0) tracks the physical volume average") {
  // Midpoint quadrature snaps the rod faces to the grid, so the cell
  // average carries an O(1/grid) interface-quantization error; at
  // grid=64 that is about 1e-2 for this geometry.
  const auto t =
      inv_epsilon_fourier(rods(rod_width_for_fill(0.82)), 0.0, 1, 64);
  const double expect = 0.82 + 0.18 / 13.0;
  CHECK(t.coeff(IVec3(0, 0, 0)).real() ==
        doctest::Approx(expect).epsilon(0.025));
}

TEST_CASE("Hermitian symmetry of the table for real epsilon") {
  for (const auto& model : {rods(), fcc()}) {
    const auto t = inv_epsilon_fourier(model, 0.7, 1, 12);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int c = -2; c <= 2; ++c) {
          const Complex x = t.coeff(IVec3(a, b, c));
          const Complex y = t.coeff(IVec3(-a, -b, -c));
          CHECK(std::abs(x - std::conj(y)) <= 1e-10);
        }
    CHECK(t.imag_norm() <= 1e-10);
  }
}

TEST_CASE("parallel quadrature matches the serial reference") {
  for (const auto& model : {rods(), fcc()}) {
    const auto par = inv_epsilon_fourier(model, 0.5, 1, 12);
    const auto ser = inv_epsilon_fourier_serial(model, 0.5, 1, 12);
    const double scale = std::abs(ser.coeff(IVec3(0, 0, 0)));
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int c = -2; c <= 2; ++c)
          CHECK(std::abs(par.coeff(IVec3(a, b, c)) -
                         ser.coeff(IVec3(a, b, c))) <= 1e-12 * scale);
  }
}

TEST_CASE("grid refinement moves smooth-boundary coefficients only slightly") {
  const auto c32 = inv_epsilon_fourier(fcc(), 0.4, 1, 32);
  const auto c64 = inv_epsilon_fourier(fcc(), 0.4, 1, 64);
  double worst = 0.0;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        worst = std::max(worst, std::abs(c64.coeff(IVec3(a, b, c)) -
                                         c32.coeff(IVec3(a, b, c))));
  CHECK(worst <= 5e-3);
}

TEST_CASE("resonance: lorentz table equals the frozen-7 table bitwise") {
  const double omega = kTwoPi * 0.489;
  PermittivityModel frozen = fcc();
  std::get<FccCoatedSpheres>(frozen.variant).coating_frozen = Complex(7.0, 0.0);

  const auto a = inv_epsilon_fourier(fcc(), omega, 1, 16);
  const auto b = inv_epsilon_fourier(frozen, omega, 1, 16);
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -2; z <= 2; ++z) {
        CHECK(a.coeff(IVec3(x, y, z)).real() == b.coeff(IVec3(x, y, z)).real());
        CHECK(a.coeff(IVec3(x, y, z)).imag() == b.coeff(IVec3(x, y, z)).imag());
      }
}

TEST_CASE("freeze() pins the coating and clears frequency dependence") {
  const auto f = fcc();
  CHECK(frequency_dependent(f));
  const auto g = freeze(f, kTwoPi * 0.1);
  CHECK(!frequency_dependent(g));
  const double want = lorentz_epsilon(LorentzParams{}, kTwoPi * 0.1);
  const double r_cp = 0.9 / (2.0 * std::sqrt(2.0));
  const Vec3 shell(0.95 * r_cp, 0.0, 0.0);
  // frozen value no longer tracks omega
  CHECK(eval_epsilon(g, shell, kTwoPi * 0.45).real() == want);
  CHECK(!frequency_dependent(homogeneous(4.0)));
  CHECK(!frequency_dependent(rods()));
}

TEST_CASE("min_re_inv_epsilon finds the stiffest region") {
  CHECK(min_re_inv_epsilon(homogeneous(4.0), 0.0) == doctest::Approx(0.25));
  // rods: 1/13 from inside the scaffold
  CHECK(min_re_inv_epsilon(rods(), 0.0) == doctest::Approx(1.0 / 13.0));
}
