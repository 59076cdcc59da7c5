#include "bloch/oracles.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bloch::oracles {

namespace {
constexpr double kPi = kTwoPi / 2.0;
}

std::vector<OmegaMult> analytic_omegas(double eps, const Vec3& k,
                                       const PlaneWaveSet& basis) {
  std::vector<double> raw;
  raw.reserve(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    raw.push_back((k + basis.mode(i)).norm() / std::sqrt(eps));
  std::sort(raw.begin(), raw.end());
  std::vector<OmegaMult> out;
  for (double w : raw) {
    if (!out.empty() && std::abs(out.back().omega - w) <= 1e-12 * (1.0 + w))
      out.back().multiplicity += 2;
    else
      out.push_back({w, 2});
  }
  return out;
}

std::vector<EtaRoot> analytic_etas(double eps, double omega,
                                   const WaveVectorSplit& split,
                                   const PlaneWaveSet& basis) {
  std::vector<EtaRoot> out;
  for (int i = 0; i < basis.size(); ++i) {
    const Vec3 gamma = gamma_of(split, basis.mode(i));
    const double b = split.alpha_hat.dot(gamma);
    const double c = gamma.squaredNorm() - eps * omega * omega;
    const double disc = b * b - c;
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      out.push_back({Complex(-b + r, 0.0), 2});
      out.push_back({Complex(-b - r, 0.0), 2});
    } else {
      const double r = std::sqrt(-disc);
      out.push_back({Complex(-b, r), 2});
      out.push_back({Complex(-b, -r), 2});
    }
  }
  std::sort(out.begin(), out.end(), [](const EtaRoot& a, const EtaRoot& b) {
    if (a.eta.real() != b.eta.real()) return a.eta.real() < b.eta.real();
    return a.eta.imag() < b.eta.imag();
  });
  return out;
}

GeneralizedSpectrum dense_generalized_eig(const Eigen::MatrixXcd& a,
                                          const Eigen::MatrixXcd& c) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || c.rows() != n || c.cols() != n)
    throw std::invalid_argument("dense_generalized_eig: shape mismatch");
  if (n > 500)
    throw DimensionTooLarge("dense_generalized_eig: dim capped at 500");

  // zggev solves A v = lambda B v; with B = -C the lambda are the eta of
  // A X = -eta C X.
  Eigen::MatrixXcd aw = a;
  Eigen::MatrixXcd bw = -c;
  Eigen::VectorXcd alpha(n), beta(n);
  Eigen::MatrixXcd vr(n, n);
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'V', n, aw.data(), n, bw.data(), n, alpha.data(),
      beta.data(), nullptr, 1, vr.data(), n);
  if (info != 0)
    throw EigenFailure("dense_generalized_eig: zggev info = " +
                       std::to_string(info));

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    scale = std::max(scale, std::abs(alpha(i)) + std::abs(beta(i)));
  GeneralizedSpectrum out;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta(i)) <= 1e-12 * scale) {
      ++out.infinite_count;
      continue;
    }
    out.finite.push_back(alpha(i) / beta(i));
    keep.push_back(i);
  }
  out.finite_vectors.resize(n, static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    out.finite_vectors.col(j) = vr.col(keep[j]);
  return out;
}

Eigen::VectorXcd quadratic_residual_vector(const PlaneWaveSet& basis,
                                           const WaveVectorSplit& split,
                                           double omega,
                                           const InvEpsilonTable& table,
                                           const Eigen::VectorXcd& u1,
                                           const Eigen::VectorXcd& p, Complex s,
                                           Complex eta) {
  const int m = basis.size();
  if (u1.size() != 3 * m || p.size() != m)
    throw std::invalid_argument("quadratic_residual: size mismatch");
  const Complex i(0.0, 1.0);
  const Mat3c s_mat = curl_matrix(split.alpha_hat);
  const int mode0 = basis.position(IVec3(0, 0, 0));

  Eigen::VectorXcd r(4 * m + 1);
  r.setZero();

  for (int row = 0; row < m; ++row) {
    const Vec3 grow = gamma_of(split, basis.mode(row));
    // eta multiplies the forms linearly and is never conjugated, so the
    // test-side combination is N'^H + eta*S^H, not (N' + eta*S)^H.
    const Mat3c test = curl_matrix(grow).adjoint() + eta * s_mat.adjoint();
    Vec3c acc = Vec3c::Zero();
    for (int col = 0; col < m; ++col) {
      const Complex cf = table.coeff(basis.index(row) - basis.index(col));
      const Mat3c trial = curl_matrix(gamma_of(split, basis.mode(col))) +
                          eta * s_mat;
      acc += cf * (test * (trial * u1.segment<3>(3 * col)));
    }
    acc -= omega * omega * u1.segment<3>(3 * row);
    acc += (i * grow.cast<Complex>() + eta * i * split.alpha_hat.cast<Complex>()) *
           p(row);
    r.segment<3>(3 * row) = acc;
  }
  for (int row = 0; row < m; ++row) {
    const Vec3 grow = gamma_of(split, basis.mode(row));
    const Vec3c u = u1.segment<3>(3 * row);
    r(3 * m + row) = -i * (grow[0] * u[0] + grow[1] * u[1] + grow[2] * u[2]) -
                     eta * i *
                         (split.alpha_hat[0] * u[0] + split.alpha_hat[1] * u[1] +
                          split.alpha_hat[2] * u[2]);
  }
  r(3 * m + mode0) += s;
  r(4 * m) = p(mode0);
  return r;
}

double quadratic_residual(const PlaneWaveSet& basis,
                          const WaveVectorSplit& split, double omega,
                          const InvEpsilonTable& table,
                          const Eigen::VectorXcd& u1, const Eigen::VectorXcd& p,
                          Complex s, Complex eta) {
  const double denom =
      std::sqrt(u1.squaredNorm() + p.squaredNorm() + std::norm(s));
  if (denom < 1e-150) throw NotAVector("quadratic_residual: zero candidate");
  return quadratic_residual_vector(basis, split, omega, table, u1, p, s, eta)
             .norm() /
         denom;
}

CrossReport cross_consistency_report(const PermittivityModel& model,
                                     const PlaneWaveSet& basis,
                                     const std::vector<double>& alpha_samples,
                                     int nev, const CrossOptions& opts) {
  if (frequency_dependent(model))
    throw NotFrequencyIndependent("cross_consistency_report: freeze first");

  const PathSpec path = PathSpec::cubic_gamma_x_m_r();
  const InvEpsilonTable table =
      inv_epsilon_fourier(model, 0.0, basis.order(), opts.grid);

  CrossReport report;
  for (double alpha : alpha_samples) {
    const Vec3 k = path.wavevector(alpha);
    const int si = path.segment_of(alpha);
    const PathSegment& seg = path.segments[si];
    const double lambda_t = (k - seg.start).dot(seg.direction);

    StandardOptions so;
    so.grid = opts.grid;
    so.table = &table;
    const auto modes = solve_standard(k, model, basis, nev, so);

    for (int band = 0; band < static_cast<int>(modes.size()); ++band) {
      const double omega = modes[band].omega;
      if (omega <= opts.omega_floor) continue;

      const double tau =
          tau_select_lenient(seg.start, seg.direction, omega, model).tau;
      const WaveVectorSplit split(seg.start, seg.direction, tau);
      QuadraticOptions qo;
      qo.grid = opts.grid;
      qo.table = &table;
      qo.dense_dim_limit = opts.dense_dim_limit;
      qo.shift = Complex(lambda_t - tau + 0.0171, 0.0);
      const auto res =
          solve_quadratic_eta(omega, split, model, basis, opts.nev_quad, qo);

      double best = 1e300;
      for (const auto& pr : res.pairs) {
        if (std::abs(pr.lambda.imag()) > 1e-6) continue;
        const Vec3 kc = seg.start + pr.lambda.real() * seg.direction;
        best = std::min(best, (kc - k).cwiseAbs().maxCoeff());
      }
      report.entries.push_back({alpha, band, omega, best});
      report.max_deviation = std::max(report.max_deviation, best);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

CheckResult check(const std::string& name, bool pass, const std::string& d) {
  return {name, pass, d};
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  std::vector<CheckResult> out;
  const PlaneWaveSet basis1(1);

  {  // Standard solver vs analytic dispersion on a homogeneous medium.
    PermittivityModel m{Homogeneous{Complex(1.0, 0.0)}, "eps1"};
    const Vec3 k(kPi / 2.0, 0.0, 0.0);
    const auto modes = solve_standard(k, m, basis1, 6);
    const auto exact = analytic_omegas(1.0, k, basis1);
    double worst = 0.0;
    std::size_t ei = 0;
    int taken = 0;
    for (const auto& md : modes) {
      if (taken == exact[ei].multiplicity) {
        ++ei;
        taken = 0;
      }
      worst = std::max(worst, std::abs(md.omega - exact[ei].omega) /
                                  std::max(1.0, exact[ei].omega));
      ++taken;
    }
    out.push_back(check("standard-vs-analytic-omegas", worst <= 1e-10,
                        "max rel dev " + fmt(worst)));
  }

  {  // Scaling: eps = 4 halves every frequency.
    PermittivityModel m1{Homogeneous{Complex(1.0, 0.0)}, "eps1"};
    PermittivityModel m4{Homogeneous{Complex(4.0, 0.0)}, "eps4"};
    const Vec3 k(kPi / 2.0, 0.0, 0.0);
    const auto a = solve_standard(k, m1, basis1, 4);
    const auto b = solve_standard(k, m4, basis1, 4);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, std::abs(b[i].omega - 0.5 * a[i].omega));
    out.push_back(
        check("epsilon-scaling", worst <= 1e-10, "max dev " + fmt(worst)));
  }

  {  // Quadratic dense solver vs analytic eta roots, propagating regime.
    PermittivityModel m{Homogeneous{Complex(1.0, 0.0)}, "eps1"};
    const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
    const double omega = kPi / 2.0;
    QuadraticOptions qo;
    qo.method = SolveMethod::Dense;
    const auto res =
        solve_quadratic_eta(omega, split, m, basis1, 4 * basis1.size(), qo);
    const auto exact = analytic_etas(1.0, omega, split, basis1);
    double worst = 0.0;
    for (const auto& pr : res.pairs) {
      double best = 1e300;
      for (const auto& root : exact)
        best = std::min(best, std::abs(pr.eta - root.eta));
      worst = std::max(worst, best / std::max(1.0, std::abs(pr.eta)));
    }
    const bool nontrivial = !res.pairs.empty();
    out.push_back(check("quadratic-vs-analytic-etas",
                        nontrivial && worst <= 1e-8,
                        "pairs " + std::to_string(res.pairs.size()) +
                            ", max rel dev " + fmt(worst)));
  }

  {  // Pencil oracle vs analytic roots on the order-0 system.
    PermittivityModel m{Homogeneous{Complex(1.0, 0.0)}, "eps1"};
    const PlaneWaveSet basis0(0);
    const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
    const double omega = kPi / 2.0;
    const auto table = inv_epsilon_fourier(m, omega, 0, 4);
    const auto sys = build_linearized_system(basis0, split, omega, 1.0, table);
    const auto spec = dense_generalized_eig(sys.A, sys.C);
    const auto exact = analytic_etas(1.0, omega, split, basis0);
    double worst = 0.0;
    for (const Complex& eta : spec.finite) {
      double best = 1e300;
      for (const auto& root : exact) best = std::min(best, std::abs(eta - root.eta));
      worst = std::max(worst, best / std::max(1.0, std::abs(eta)));
    }
    const bool count_ok = static_cast<int>(spec.finite.size()) == 4;
    out.push_back(check("zggev-vs-analytic-order0", count_ok && worst <= 1e-10,
                        "finite " + std::to_string(spec.finite.size()) +
                            ", max rel dev " + fmt(worst)));
  }

  {  // Arnoldi vs pencil oracle on an order-1 homogeneous system.
    PermittivityModel m{Homogeneous{Complex(1.0, 0.0)}, "eps1"};
    const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(1, 0, 0), kPi);
    const double omega = 1.3;
    const auto table = inv_epsilon_fourier(m, omega, 1, 8);
    const auto sys = build_linearized_system(basis1, split, omega, 1.0, table);
    const auto spec = dense_generalized_eig(sys.A, sys.C);
    QuadraticOptions qo;
    qo.method = SolveMethod::Arnoldi;
    qo.table = &table;
    const auto res = solve_quadratic_eta(omega, split, m, basis1, 6, qo);
    double worst = 0.0;
    for (const auto& pr : res.pairs) {
      double best = 1e300;
      for (const Complex& eta : spec.finite)
        best = std::min(best, std::abs(pr.eta - eta));
      worst = std::max(worst, best / std::max(1.0, std::abs(pr.eta)));
    }
    out.push_back(check("arnoldi-vs-dense-oracle",
                        !res.pairs.empty() && worst <= 1e-8,
                        "pairs " + std::to_string(res.pairs.size()) +
                            ", max rel dev " + fmt(worst)));
  }

  {  // Multiplier vanishing and linear/quadratic residual consistency.
    PermittivityModel m{Homogeneous{Complex(2.0, 0.0)}, "eps2"};
    const WaveVectorSplit split(Vec3(0, 0, 0), Vec3(0, 1, 0), kPi);
    const double omega = 0.9;
    const auto table = inv_epsilon_fourier(m, omega, 1, 8);
    QuadraticOptions qo;
    qo.method = SolveMethod::Dense;
    qo.table = &table;
    const auto res = solve_quadratic_eta(omega, split, m, basis1, 8, qo);
    const auto sys = build_linearized_system(basis1, split, omega, 1.0, table);
    bool ok = !res.pairs.empty();
    double worst_ratio = 0.0;
    for (const auto& pr : res.pairs) {
      ok = ok && pr.p_norm <= 1e-8 && pr.s_abs <= 1e-8 && pr.u2_gap <= 1e-8;
      const double lin = residual(sys, pr.eta, pr.fields.join());
      const double quad = quadratic_residual(basis1, split, omega, table,
                                             pr.fields.u1, pr.fields.p,
                                             pr.fields.s, pr.eta);
      worst_ratio = std::max(worst_ratio, quad / std::max(lin, 1e-14));
    }
    out.push_back(check("multiplier-vanishing-and-lemma32", ok && worst_ratio <= 10.0,
                        "worst quad/lin ratio " + fmt(worst_ratio)));
  }

  {  // Small cross-consistency round trip on the rod scaffold.
    PermittivityModel m{RodScaffold{Complex(13.0, 0.0), rod_width_for_fill(0.82)},
                        "rods"};
    CrossOptions co;
    co.grid = 32;
    co.nev_quad = 6;
    const auto rep = cross_consistency_report(m, basis1, {0.4 * kPi, 1.6 * kPi}, 2, co);
    out.push_back(check("cross-consistency-rods-order1",
                        !rep.entries.empty() && rep.max_deviation <= 1e-6,
                        "max |k dev|_inf " + fmt(rep.max_deviation)));
  }

  return out;
}

}  // namespace bloch::oracles
