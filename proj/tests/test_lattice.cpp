#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "bloch/lattice.hpp"
#include "doctest.h"

using namespace bloch;

namespace {

constexpr double kPi = kTwoPi / 2.0;

std::mt19937_64 rng(12345);

Vec3c random_c3() {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  return Vec3c(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)),
               Complex(uni(rng), uni(rng)));
}

Vec3 random_unit() {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vec3 v(uni(rng), uni(rng), uni(rng));
  while (v.norm() < 1e-3) v = Vec3(uni(rng), uni(rng), uni(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("build_index_set counts and ordering") {
  CHECK(build_index_set(0).size() == 1);
  CHECK(build_index_set(0).index(0) == IVec3(0, 0, 0));
  CHECK(build_index_set(1).size() == 27);
  CHECK(build_index_set(2).size() == 125);

  const PlaneWaveSet s(1);
  CHECK(s.index(0) == IVec3(-1, -1, -1));
  CHECK(s.mode(0).isApprox(Vec3(-kTwoPi, -kTwoPi, -kTwoPi)));

  // lexicographic and bijective
  for (int m = 0; m < s.size(); ++m) CHECK(s.position(s.index(m)) == m);
  for (int m = 1; m < s.size(); ++m) {
    const IVec3 a = s.index(m - 1), b = s.index(m);
    CHECK(std::lexicographical_compare(a.data(), a.data() + 3, b.data(),
                                       b.data() + 3));
  }
}

TEST_CASE("index set ordering is stable across construction") {
  const PlaneWaveSet a(2), b(2);
  for (int m = 0; m < a.size(); ++m) {
    CHECK(a.index(m) == b.index(m));
    CHECK(a.mode(m)[0] == b.mode(m)[0]);  // bitwise
  }
}

TEST_CASE("WaveVectorSplit validation") {
  CHECK_NOTHROW(WaveVectorSplit(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi));
  CHECK_THROWS_AS(WaveVectorSplit(Vec3(0, 0, 0), Vec3(1.1, 0, 0), 1.0),
                  std::invalid_argument);
  // beta = alpha0 + tau*alpha_hat must stay inside [-pi,pi]^3
  CHECK_THROWS_AS(WaveVectorSplit(Vec3(kPi, 0, 0), Vec3(1, 0, 0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("gamma_of shifts") {
  const WaveVectorSplit sp(Vec3(kPi, 0, 0), Vec3(0, 1, 0), 0.0);
  CHECK(gamma_of(sp, Vec3(0, 0, 0)).isApprox(Vec3(kPi, 0, 0)));
  CHECK(gamma_of(sp, Vec3(-kTwoPi, 0, 0)).isApprox(Vec3(-kPi, 0, 0)));
  const WaveVectorSplit sp2(Vec3(kPi, kPi, 0), Vec3(0, 0, 1), 0.0);
  CHECK(gamma_of(sp2, Vec3(0, -kTwoPi, 0)).isApprox(Vec3(kPi, -kPi, 0)));
}

TEST_CASE("curl_matrix structure") {
  const Mat3c n = curl_matrix(Vec3(kPi, 0, 0));
  const Complex i(0, 1);
  CHECK(n(0, 0) == Complex(0, 0));
  CHECK(n(1, 2) == -i * kPi);
  CHECK(n(2, 1) == i * kPi);
  // N^H N = pi^2 diag(0,1,1)
  const Mat3c nhn = n.adjoint() * n;
  CHECK(std::abs(nhn(0, 0)) < 1e-14);
  CHECK(std::abs(nhn(1, 1) - kPi * kPi) < 1e-12);
  CHECK(std::abs(nhn(2, 2) - kPi * kPi) < 1e-12);

  CHECK(curl_matrix(Vec3(0, 0, 0)).norm() == 0.0);

  // Hermitian (i times a real skew matrix)
  const Mat3c g = curl_matrix(Vec3(0.3, -1.2, 2.2));
  CHECK((g - g.adjoint()).norm() < 1e-14);
}

TEST_CASE("curl identity |N C|^2 + |gamma.C|^2 = |gamma|^2 |C|^2") {
  // the spec's worked case first
  {
    const Vec3 g(1, 2, 3);
    const Vec3c c(1, 0, 0);
    const Mat3c n = curl_matrix(g);
    const double lhs = (n * c).squaredNorm() + std::norm(g.cast<Complex>().dot(c));
    CHECK(lhs == doctest::Approx(14.0).epsilon(1e-14));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 g = 5.0 * random_unit();
    const Vec3c c = random_c3();
    const Mat3c n = curl_matrix(g);
    // plain (unconjugated) dot with the real vector gamma
    const Complex gdotc = g[0] * c[0] + g[1] * c[1] + g[2] * c[2];
    const double lhs = (n * c).squaredNorm() + std::norm(gdotc);
    const double rhs = g.squaredNorm() * c.squaredNorm();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    // and N gamma = 0 exactly in structure
    CHECK((n * g.cast<Complex>()).norm() < 1e-12 * g.norm() * g.norm());
    // second application: |N(NC)|^2 = |gamma|^2 |NC|^2
    const double l2 = (n * (n * c)).squaredNorm();
    const double r2 = g.squaredNorm() * (n * c).squaredNorm();
    CHECK(std::abs(l2 - r2) <= 1e-12 * std::max(r2, 1.0));
  }
}

TEST_CASE("polarization_basis") {
  {
    auto [e1, e2] = polarization_basis(Vec3(0, 0, 1));
    CHECK(e1.isApprox(Vec3(1, 0, 0)));
    CHECK(e2.isApprox(Vec3(0, 1, 0)));
  }
  {
    auto [e1, e2] = polarization_basis(Vec3(1, 0, 0));
    CHECK(std::abs(e1.dot(Vec3(1, 0, 0))) < 1e-14);
    CHECK(std::abs(e2.dot(Vec3(1, 0, 0))) < 1e-14);
    CHECK(e1.norm() == doctest::Approx(1.0));
    CHECK(e2.norm() == doctest::Approx(1.0));
  }
  {
    auto [e1, e2] = polarization_basis(Vec3(1, 1, 1));
    CHECK(std::abs(e1.dot(e2)) < 1e-14);
  }
  CHECK_THROWS_AS(polarization_basis(Vec3(0, 0, 0)), ZeroVector);
  CHECK_THROWS_AS(polarization_basis(Vec3(1e-13, 0, 0)), ZeroVector);

  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 g = 3.0 * random_unit();
    auto [e1, e2] = polarization_basis(g);
    CHECK(std::abs(e1.dot(e2)) < 1e-13);
    CHECK(std::abs(e1.dot(g)) < 1e-13 * g.norm());
    CHECK(std::abs(e2.dot(g)) < 1e-13 * g.norm());
    CHECK(e1.norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e2.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("helmholtz_split") {
  const PlaneWaveSet basis(0);
  const WaveVectorSplit sp(Vec3(kPi, 0, 0), Vec3(1, 0, 0), 0.0);

  {  // C parallel to gamma: pure gradient
    std::vector<Vec3c> c = {Vec3c(2.0, 0.0, 0.0)};
    const auto parts = helmholtz_split(c, sp, basis);
    CHECK(parts.transverse[0].norm() < 1e-14);
    CHECK((parts.gradient[0] - c[0]).norm() < 1e-14);
  }
  {  // C perpendicular: pure transverse
    std::vector<Vec3c> c = {Vec3c(0.0, 1.0, 1.0)};
    const auto parts = helmholtz_split(c, sp, basis);
    CHECK(parts.gradient[0].norm() < 1e-14);
  }
  {  // spec projection case: C=(1,1,0), gamma=(pi,0,0)
    std::vector<Vec3c> c = {Vec3c(1.0, 1.0, 0.0)};
    const auto parts = helmholtz_split(c, sp, basis);
    CHECK((parts.gradient[0] - Vec3c(1, 0, 0)).norm() < 1e-14);
    CHECK((parts.transverse[0] - Vec3c(0, 1, 0)).norm() < 1e-14);
  }
}

TEST_CASE("helmholtz_split reconstructs, is transverse, and is idempotent") {
  const PlaneWaveSet basis(1);
  const WaveVectorSplit sp(Vec3(0.4, -0.8, 0.2), Vec3(0, 0, 1), 0.3);
  std::vector<Vec3c> c(basis.size());
  for (auto& v : c) v = random_c3();

  const auto parts = helmholtz_split(c, sp, basis);
  for (int m = 0; m < basis.size(); ++m) {
    const Vec3 g = gamma_of(sp, basis.mode(m));
    CHECK((parts.transverse[m] + parts.gradient[m] - c[m]).norm() < 1e-13);
    const Complex tdotg = g[0] * parts.transverse[m][0] +
                          g[1] * parts.transverse[m][1] +
                          g[2] * parts.transverse[m][2];
    CHECK(std::abs(tdotg) < 1e-12);
  }
  const auto again = helmholtz_split(parts.transverse, sp, basis);
  for (int m = 0; m < basis.size(); ++m) {
    CHECK((again.transverse[m] - parts.transverse[m]).norm() < 1e-13);
    CHECK(again.gradient[m].norm() < 1e-12);
  }
}

TEST_CASE("helmholtz_split rejects zero gamma") {
  const PlaneWaveSet basis(1);
  // beta=0 is representable only through alpha0=0, tau=0; gamma of the
  // zero mode then vanishes.
  const WaveVectorSplit sp(Vec3(0, 0, 0), Vec3(1, 0, 0), 0.0);
  std::vector<Vec3c> c(basis.size(), Vec3c(1, 0, 0));
  CHECK_THROWS_AS(helmholtz_split(c, sp, basis), ZeroVector);
}
