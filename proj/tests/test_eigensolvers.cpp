#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "bloch/eigensolvers.hpp"
#include "bloch/oracles.hpp"
#include "doctest.h"

using namespace bloch;

namespace {

constexpr double kPi = kTwoPi / 2.0;

PermittivityModel homogeneous(Complex eps) { return {Homogeneous{eps}, "hom"}; }

bool contains_eta(const std::vector<EtaEigenpair>& pairs, Complex want,
                  int multiplicity, double tol) {
  int found = 0;
  for (const auto& pr : pairs)
    if (std::abs(pr.eta - want) <= tol) ++found;
  return found >= multiplicity;
}

}  // namespace

TEST_CASE("admissibility thresholds match the closed forms exactly") {
  const auto eps1 = homogeneous(1.0);

  {  // case (a): alpha0 = 0, tau = pi
    const WaveVectorSplit sp(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
    const auto rep = check_admissibility(sp, 1.0, eps1);
    CHECK(rep.case_label == 'a');
    // exact arithmetic: min over Z^3 equals min{(2pi-|tau|)^2, tau^2}
    CHECK(rep.min_gamma_sq == rep.case_threshold);
    CHECK(rep.min_gamma_sq == kPi * kPi);
    CHECK(rep.margin == doctest::Approx(kPi * kPi - 1.0).epsilon(1e-15));
    CHECK(rep.ok);
    // boundary: omega = pi gives zero margin, not admissible
    CHECK(!check_admissibility(sp, kPi, eps1).ok);
    CHECK(check_admissibility(sp, kPi, eps1).margin == 0.0);
  }
  {  // case (b): alpha0 = (pi,0,0), tau = 0 -> threshold pi^2
    const WaveVectorSplit sp(Vec3(kPi, 0, 0), Vec3(0, 1, 0), 0.0);
    const auto rep = check_admissibility(sp, 3.0, eps1);
    CHECK(rep.case_label == 'b');
    CHECK(rep.min_gamma_sq == kPi * kPi);
    CHECK(rep.case_threshold == kPi * kPi);
    CHECK(rep.margin == doctest::Approx(kPi * kPi - 9.0).epsilon(1e-15));
    CHECK(rep.ok);
    CHECK(!check_admissibility(sp, kPi + 1e-9, eps1).ok);
  }
  {  // case (c): alpha0 = (pi,pi,0) -> threshold 2 pi^2
    const WaveVectorSplit sp(Vec3(kPi, kPi, 0), Vec3(0, 0, 1), 0.0);
    const auto rep = check_admissibility(sp, 0.0, eps1);
    CHECK(rep.case_label == 'c');
    CHECK(rep.min_gamma_sq == 2.0 * kPi * kPi);
    CHECK(rep.case_threshold == 2.0 * kPi * kPi);
    const double w_edge = std::sqrt(2.0) * kPi;
    CHECK(check_admissibility(sp, w_edge - 1e-9, eps1).ok);
    CHECK(!check_admissibility(sp, w_edge + 1e-9, eps1).ok);
  }
  {  // case (a) with tau = pi: threshold min{(2pi-pi)^2, pi^2} = pi^2
    const WaveVectorSplit sp(Vec3(0, 0, 0), Vec3(0, 1, 0), kPi);
    const auto rep = check_admissibility(sp, 2.0, eps1);
    CHECK(rep.case_threshold == std::min((kTwoPi - kPi) * (kTwoPi - kPi),
                                         kPi * kPi));
    CHECK(rep.case_threshold == rep.min_gamma_sq);
  }
  {  // general alpha0: exact minimum is the wrapped |beta|^2
    const WaveVectorSplit sp(Vec3(0.7, -0.4, 0.2), Vec3(0, 0, 1), 0.3);
    const auto rep = check_admissibility(sp, 0.1, eps1);
    CHECK(rep.case_label == 'g');
    const Vec3 beta = sp.beta();
    CHECK(rep.min_gamma_sq == doctest::Approx(beta.squaredNorm()).epsilon(1e-15));
    CHECK(rep.limiting_mode == IVec3(0, 0, 0));
  }
  {  // permittivity floor scales the margin: eps = 4 quarters it
    const WaveVectorSplit sp(Vec3(kPi, 0, 0), Vec3(0, 1, 0), 0.0);
    const auto rep = check_admissibility(sp, 0.0, homogeneous(4.0));
    CHECK(rep.inf_re_inv_eps == doctest::Approx(0.25));
    CHECK(rep.margin == doctest::Approx(kPi * kPi / 4).epsilon(1e-12));
  }
}

TEST_CASE("solve_standard: homogeneous exactness and scaling") {
  const PlaneWaveSet basis(1);
  const Vec3 k(kPi / 2.0, 0.0, 0.0);

  const auto modes = solve_standard(k, homogeneous(1.0), basis, 6);
  REQUIRE(modes.size() == 6);
  CHECK(modes[0].omega == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(modes[1].omega == doctest::Approx(kPi / 2).epsilon(1e-12));
  // next distinct value: |k + 2pi(-1,0,0)| = 3pi/2
  CHECK(modes[2].omega == doctest::Approx(3 * kPi / 2).epsilon(1e-12));
  CHECK(modes[3].omega == doctest::Approx(3 * kPi / 2).epsilon(1e-12));

  const auto quarter = solve_standard(k, homogeneous(4.0), basis, 4);
  for (int i = 0; i < 4; ++i)
    CHECK(quarter[i].omega ==
          doctest::Approx(0.5 * modes[i].omega).epsilon(1e-12));
}

TEST_CASE("solve_standard agrees with the analytic oracle across k") {
  const PlaneWaveSet basis(1);
  for (const Vec3& k : {Vec3(0.6, 0.0, 0.0), Vec3(kPi, 1.1, 0.0),
                        Vec3(0.3, 0.6, 0.9)}) {
    const auto modes = solve_standard(k, homogeneous(2.0), basis, 8);
    const auto exact = oracles::analytic_omegas(2.0, k, basis);
    std::size_t ei = 0;
    int used = 0;
    for (const auto& md : modes) {
      if (used == exact[ei].multiplicity) {
        ++ei;
        used = 0;
      }
      CHECK(std::abs(md.omega - exact[ei].omega) <=
            1e-10 * std::max(1.0, exact[ei].omega));
      ++used;
    }
  }
}

TEST_CASE("solve_standard guards") {
  const PlaneWaveSet basis(1);
  PermittivityModel lorentz{FccCoatedSpheres{}, "fcc"};
  CHECK_THROWS_AS(solve_standard(Vec3(1, 0, 0), lorentz, basis, 2),
                  NotFrequencyIndependent);
  CHECK_NOTHROW(solve_standard(Vec3(1, 0, 0), freeze(lorentz, 1.0), basis, 2,
                               StandardOptions{16, 1e-9, nullptr}));
  CHECK_THROWS_AS(solve_standard(Vec3(0, 0, 0), homogeneous(1.0), basis, 2),
                  ZeroVector);
  CHECK_THROWS_AS(solve_standard(Vec3(kTwoPi, 0, 0), homogeneous(1.0), basis, 2),
                  ZeroVector);
}

TEST_CASE("solve_quadratic_eta dense: homogeneous eta set and diagnostics") {
  const PlaneWaveSet basis(1);
  const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
  QuadraticOptions qo;
  qo.method = SolveMethod::Dense;
  const auto res =
      solve_quadratic_eta(kPi / 2.0, split, homogeneous(1.0), basis, 200, qo);

  CHECK(contains_eta(res.pairs, Complex(-kPi / 2, 0), 2, 1e-8));
  CHECK(contains_eta(res.pairs, Complex(-3 * kPi / 2, 0), 2, 1e-8));
  for (const auto& pr : res.pairs) {
    CHECK(pr.residual <= 1e-8);
    CHECK(pr.u2_gap <= 1e-8);
    CHECK(pr.p_norm <= 1e-8 * pr.u1_norm);
    CHECK(pr.s_abs <= 1e-8);
  }
  // lambda = eta + tau and k = alpha0 + lambda alpha_hat
  for (const auto& pr : res.pairs) {
    CHECK(pr.lambda == pr.eta + Complex(kPi, 0.0));
    CHECK(std::abs(pr.k[0] - pr.lambda) < 1e-15);
  }
}

TEST_CASE("quadratic dense matches analytic roots including evanescent ones") {
  const PlaneWaveSet basis(1);
  // transverse beta: all order-0 roots complex at small omega
  const WaveVectorSplit split(Vec3(kPi, 0, 0), Vec3(0, 1, 0), 0.0);
  const double omega = 0.5;
  QuadraticOptions qo;
  qo.method = SolveMethod::Dense;
  const auto res =
      solve_quadratic_eta(omega, split, homogeneous(1.0), basis, 400, qo);
  const auto exact = oracles::analytic_etas(1.0, omega, split, basis);
  REQUIRE(!res.pairs.empty());
  bool saw_complex = false;
  for (const auto& pr : res.pairs) {
    double best = 1e300;
    for (const auto& root : exact)
      best = std::min(best, std::abs(pr.eta - root.eta));
    CHECK(best <= 1e-8 * std::max(1.0, std::abs(pr.eta)));
    saw_complex = saw_complex || std::abs(pr.eta.imag()) > 1e-6;
  }
  CHECK(saw_complex);
  // count check: 4 finite eta per mode
  CHECK(static_cast<int>(res.pairs.size()) == 4 * basis.size());
}

TEST_CASE("shift-invert operator") {
  const PlaneWaveSet basis(0);
  const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
  const auto table = inv_epsilon_fourier(homogeneous(1.0), 0.0, 0, 4);
  const auto sys = build_linearized_system(basis, split, kPi / 2, 1.0, table);

  QuadraticOptions qo;
  qo.method = SolveMethod::Dense;
  const auto res =
      solve_quadratic_eta(kPi / 2, split, homogeneous(1.0), basis, 8, qo);
  REQUIRE(!res.pairs.empty());

  const ShiftInvertOperator op(sys, Complex(0.0, 0.0));
  {  // exact eigenvector maps to (1/eta) x
    const auto& pr = res.pairs.front();
    const Eigen::VectorXcd x = pr.fields.join();
    const Eigen::VectorXcd y = op.apply(x);
    CHECK((y - x / pr.eta).norm() <= 1e-10 * x.norm());
  }
  {  // the s-direction lies in the kernel of C
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(sys.dim());
    x(sys.off_s()) = 1.0;
    CHECK(op.apply(x).norm() == 0.0);
  }
  {  // dense eigenvalues of the transformed operator are 1/(eta - shift)
    const Complex shift(0.4, 0.1);
    const ShiftInvertOperator ops(sys, shift);
    Eigen::MatrixXcd k(sys.dim(), sys.dim());
    for (int j = 0; j < sys.dim(); ++j)
      k.col(j) = ops.apply(Eigen::MatrixXcd::Identity(sys.dim(), sys.dim()).col(j));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(k);
    const auto spec = oracles::dense_generalized_eig(sys.A, sys.C);
    const double mu_max = ces.eigenvalues().cwiseAbs().maxCoeff();
    for (int j = 0; j < sys.dim(); ++j) {
      const Complex mu = ces.eigenvalues()(j);
      if (std::abs(mu) <= 1e-8 * mu_max) continue;
      double best = 1e300;
      for (const Complex& eta : spec.finite)
        best = std::min(best, std::abs(mu - 1.0 / (eta - shift)));
      CHECK(best <= 1e-8 * std::abs(mu));
    }
  }
}

TEST_CASE("arnoldi on a known diagonal operator") {
  const int n = 40;
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = i + 1.0;
  const auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return diag.cast<Complex>().asDiagonal() * x;
  };
  const auto res = arnoldi(apply, n, 20, 4, 1e-12, 60);
  REQUIRE(static_cast<int>(res.pairs.size()) == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(res.pairs[i].value - Complex(n - i, 0)) <= 1e-10 * n);
}

TEST_CASE("arnoldi flags a rank-deficient operator") {
  const int n = 30;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  diag(0) = 3.0;
  diag(1) = 2.0;
  diag(2) = 1.0;
  const auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return diag.cast<Complex>().asDiagonal() * x;
  };
  const auto res = arnoldi(apply, n, 10, 6, 1e-12, 60);
  CHECK(res.exhausted_subspace);
  CHECK(static_cast<int>(res.pairs.size()) == 3);
  CHECK(std::abs(res.pairs[0].value - Complex(3, 0)) <= 1e-10);
}

TEST_CASE("arnoldi matches the dense oracle on an order-1 system") {
  const PlaneWaveSet basis(1);
  const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
  const double omega = 1.1;
  const auto table = inv_epsilon_fourier(homogeneous(1.0), 0.0, 1, 8);
  const auto sys = build_linearized_system(basis, split, omega, 1.0, table);
  const auto spec = oracles::dense_generalized_eig(sys.A, sys.C);

  QuadraticOptions qo;
  qo.method = SolveMethod::Arnoldi;
  qo.table = &table;
  const auto res =
      solve_quadratic_eta(omega, split, homogeneous(1.0), basis, 6, qo);
  REQUIRE(!res.pairs.empty());
  for (const auto& pr : res.pairs) {
    double best = 1e300;
    for (const Complex& eta : spec.finite)
      best = std::min(best, std::abs(pr.eta - eta));
    CHECK(best <= 1e-8 * std::max(1.0, std::abs(pr.eta)));
  }
}

TEST_CASE("residual definition and guards") {
  const PlaneWaveSet basis(0);
  const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
  const auto table = inv_epsilon_fourier(homogeneous(1.0), 0.0, 0, 4);
  const auto sys = build_linearized_system(basis, split, kPi / 2, 1.0, table);

  QuadraticOptions qo;
  qo.method = SolveMethod::Dense;
  const auto res =
      solve_quadratic_eta(kPi / 2, split, homogeneous(1.0), basis, 8, qo);
  REQUIRE(!res.pairs.empty());
  const auto& pr = res.pairs.front();
  const Eigen::VectorXcd x = pr.fields.join();
  CHECK(residual(sys, pr.eta, x) <= 1e-10);

  // 1e-6 noise lands in the sanity band
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd noisy = x;
  for (int i = 0; i < noisy.size(); ++i)
    noisy(i) += 1e-6 * Complex(uni(rng), uni(rng));
  const double r = residual(sys, pr.eta, noisy);
  CHECK(r >= 1e-8);
  CHECK(r <= 1e-4);

  CHECK_THROWS_AS(residual(sys, pr.eta, Eigen::VectorXcd::Zero(sys.dim())),
                  NotAVector);
}

TEST_CASE("tau nudge on a resonant system") {
  // omega = pi with beta = (pi,0,0) puts omega^2 exactly on a beta-problem
  // eigenvalue; A is singular and the solver retries with tau -+ 1e-3.
  const PlaneWaveSet basis(0);
  const WaveVectorSplit split(Vec3(kPi, 0, 0), Vec3(1, 0, 0), 0.0);
  QuadraticOptions qo;
  qo.method = SolveMethod::Dense;
  const auto res = solve_quadratic_eta(kPi, split, homogeneous(1.0), basis, 8, qo);
  CHECK(res.tau_perturbed);
  CHECK(res.tau_used == doctest::Approx(-1e-3));
}

TEST_CASE("strict admissibility throws NoAdmissibleTau") {
  const PlaneWaveSet basis(0);
  const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
  QuadraticOptions qo;
  qo.require_admissible = true;
  CHECK_THROWS_AS(
      solve_quadratic_eta(4.0, split, homogeneous(1.0), basis, 4, qo),
      NoAdmissibleTau);
}
