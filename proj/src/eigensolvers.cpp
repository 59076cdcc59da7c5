#include "bloch/eigensolvers.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace bloch {

namespace {

constexpr double kPi = kTwoPi / 2.0;

bool near(const Vec3& a, double x, double y, double z) {
  return std::abs(a[0] - x) < 1e-14 && std::abs(a[1] - y) < 1e-14 &&
         std::abs(a[2] - z) < 1e-14;
}

}  // namespace

AdmissibilityReport check_admissibility(const WaveVectorSplit& split,
                                        double omega,
                                        const PermittivityModel& model) {
  AdmissibilityReport rep;
  const Vec3 beta = split.beta();

  // Exact minimum of |beta + I|^2 over the full reciprocal lattice:
  // the lattice is a coordinate product, so each component minimizes
  // independently.
  double msq = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double i_best = -std::round(beta[j] / kTwoPi);
    rep.limiting_mode[j] = static_cast<int>(i_best);
    const double d = beta[j] + kTwoPi * i_best;
    msq += d * d;
  }
  rep.min_gamma_sq = msq;

  if (near(split.alpha0, 0, 0, 0)) {
    rep.case_label = 'a';
    const double a = kTwoPi - std::abs(split.tau);
    rep.case_threshold = std::min(a * a, split.tau * split.tau);
  } else if (near(split.alpha0, kPi, 0, 0)) {
    rep.case_label = 'b';
    rep.case_threshold = kPi * kPi;
  } else if (near(split.alpha0, kPi, kPi, 0)) {
    rep.case_label = 'c';
    rep.case_threshold = 2.0 * kPi * kPi;
  } else {
    rep.case_label = 'g';
    rep.case_threshold = msq;
  }

  rep.inf_re_inv_eps = min_re_inv_epsilon(model, omega);
  rep.margin = rep.inf_re_inv_eps * rep.min_gamma_sq - omega * omega;
  rep.ok = rep.margin > 0.0;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<Vec3c> expand_transverse(const Eigen::VectorXcd& reduced,
                                     const Vec3& k, const PlaneWaveSet& basis) {
  const int m = basis.size();
  if (reduced.size() != 2 * m)
    throw std::invalid_argument("expand_transverse: size mismatch");
  std::vector<Vec3c> out(m);
  for (int i = 0; i < m; ++i) {
    auto [e1, e2] = polarization_basis(k + basis.mode(i));
    out[i] = reduced(2 * i) * e1.cast<Complex>() +
             reduced(2 * i + 1) * e2.cast<Complex>();
  }
  return out;
}

std::vector<StandardMode> solve_standard(const Vec3& k,
                                         const PermittivityModel& model,
                                         const PlaneWaveSet& basis, int nev,
                                         const StandardOptions& opts) {
  if (frequency_dependent(model))
    throw NotFrequencyIndependent(
        "solve_standard: permittivity depends on frequency; freeze it first");
  const int m = basis.size();

  // Transverse polarization pair per mode; fails on any gamma = 0.
  std::vector<Vec3c> w(2 * m);
  for (int i = 0; i < m; ++i) {
    const Vec3 gamma = k + basis.mode(i);
    auto [e1, e2] = polarization_basis(gamma);
    const Mat3c n = curl_matrix(gamma);
    w[2 * i] = n * e1.cast<Complex>();
    w[2 * i + 1] = n * e2.cast<Complex>();
  }

  InvEpsilonTable local(0, 0.0);
  const InvEpsilonTable* table = opts.table;
  if (!table) {
    local = inv_epsilon_fourier(model, 0.0, basis.order(), opts.grid);
    table = &local;
  }
  if (table->order() < basis.order())
    throw MissingCoefficient("solve_standard: table order below basis order");

  Eigen::MatrixXcd h(2 * m, 2 * m);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      const Complex c = table->coeff(basis.index(row) - basis.index(col));
      for (int pr = 0; pr < 2; ++pr)
        for (int pc = 0; pc < 2; ++pc)
          h(2 * row + pr, 2 * col + pc) = c * w[2 * row + pr].dot(w[2 * col + pc]);
    }
  }

  std::vector<StandardMode> modes;
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
      throw EigenFailure("solve_standard: Hermitian eigensolve failed");
    for (int i = 0; i < 2 * m && static_cast<int>(modes.size()) < nev; ++i) {
      const double w2 = es.eigenvalues()(i);
      if (w2 < -opts.neg_tol * scale) continue;
      modes.push_back({w2, std::sqrt(std::max(0.0, w2)), es.eigenvectors().col(i)});
    }
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
      throw EigenFailure("solve_standard: eigensolve failed");
    std::vector<int> order(2 * m);
    for (int i = 0; i < 2 * m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    for (int oi = 0; oi < 2 * m && static_cast<int>(modes.size()) < nev; ++oi) {
      const Complex w2 = es.eigenvalues()(order[oi]);
      if (std::abs(w2.imag()) > 1e-8 * scale)
        throw EigenFailure("solve_standard: complex omega^2 from lossy model");
      if (w2.real() < -opts.neg_tol * scale) continue;
      modes.push_back({w2.real(), std::sqrt(std::max(0.0, w2.real())),
                       es.eigenvectors().col(order[oi])});
    }
  }
  return modes;
}

// ---------------------------------------------------------------------------

ShiftInvertOperator::ShiftInvertOperator(const MixedBlockSystem& system,
                                         Complex shift)
    : lu_(system.A + shift * system.C), c_(&system.C), shift_(shift) {
  if (lu_.rcond() < 1e-14)
    throw SingularFactor("ShiftInvertOperator: A + shift*C is singular");
}

Eigen::VectorXcd ShiftInvertOperator::apply(const Eigen::VectorXcd& x) const {
  return -lu_.solve((*c_) * x);
}

double residual(const MixedBlockSystem& system, Complex eta,
                const Eigen::VectorXcd& x) {
  const double nx = x.norm();
  if (nx < 1e-150) throw NotAVector("residual: zero vector");
  return (system.A * x + eta * (system.C * x)).norm() / nx;
}

namespace {

EtaEigenpair make_pair(const MixedBlockSystem& sys, Complex eta,
                       Eigen::VectorXcd x, const QuadraticOptions& opts,
                       bool inadmissible) {
  x /= x.norm();
  EtaEigenpair pr;
  pr.eta = eta;
  pr.lambda = eta + sys.meta.split.tau;
  pr.k = sys.meta.split.alpha0.cast<Complex>() +
         pr.lambda * sys.meta.split.alpha_hat.cast<Complex>();
  pr.fields = FieldCoefficients::split_state(x, sys.num_modes);
  pr.residual = residual(sys, eta, x);
  pr.u1_norm = pr.fields.u1.norm();
  pr.p_norm = pr.fields.p.norm();
  pr.s_abs = std::abs(pr.fields.s);
  pr.u2_gap = (pr.fields.u2 - eta * pr.fields.u1).norm() /
              std::max(pr.u1_norm, 1e-300);

  const bool real_lambda = std::abs(pr.lambda.imag()) <= opts.im_tol;
  const bool in_window = pr.lambda.real() >= -opts.path_margin &&
                         pr.lambda.real() <= kPi + opts.path_margin;
  pr.physical = real_lambda && in_window;
  pr.flag = "ok";
  if (!real_lambda) pr.flag = "complex";
  if (!in_window) pr.flag = real_lambda ? "outside-window" : "complex,outside-window";
  if (inadmissible) pr.flag += ",inadmissible";
  return pr;
}

bool accept_pair(const EtaEigenpair& pr, const QuadraticOptions& opts) {
  if (pr.residual > opts.accept_tol) return false;
  if (pr.u1_norm < 1e-8) return false;  // pure multiplier/auxiliary mode
  if (pr.p_norm > opts.diag_tol * pr.u1_norm) return false;
  if (pr.s_abs > opts.diag_tol) return false;
  if (pr.u2_gap > opts.diag_tol) return false;
  return true;
}

void solve_pencil_dense(const MixedBlockSystem& sys,
                        std::vector<Complex>& etas,
                        std::vector<Eigen::VectorXcd>& vecs) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.A);
  if (lu.rcond() < 1e-14) throw SingularA("solve_quadratic_eta: A is singular");
  const Eigen::MatrixXcd k = -lu.solve(sys.C);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(k);
  if (ces.info() != Eigen::Success)
    throw EigenFailure("solve_quadratic_eta: dense eigensolve failed");
  const double mu_max = ces.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < k.rows(); ++i) {
    const Complex mu = ces.eigenvalues()(i);
    if (std::abs(mu) <= 1e-10 * mu_max) continue;  // infinite-eta direction
    etas.push_back(1.0 / mu);
    vecs.push_back(ces.eigenvectors().col(i));
  }
}

void solve_pencil_arnoldi(const MixedBlockSystem& sys, Complex shift, int nev,
                          const QuadraticOptions& opts,
                          std::vector<Complex>& etas,
                          std::vector<Eigen::VectorXcd>& vecs) {
  std::unique_ptr<ShiftInvertOperator> op;
  Complex sh = shift;
  for (int attempt = 0;; ++attempt) {
    try {
      op = std::make_unique<ShiftInvertOperator>(sys, sh);
      break;
    } catch (const SingularFactor&) {
      if (attempt >= 3) throw;
      sh += Complex(0.0137, 0.0071) * (1.0 + std::abs(sh));
    }
  }
  const int dim = sys.dim();
  int subspace = opts.subspace > 0 ? opts.subspace : std::max(2 * nev + 12, 36);
  subspace = std::min(subspace, dim);
  ArnoldiResult ar =
      arnoldi([&](const Eigen::VectorXcd& x) { return op->apply(x); }, dim,
              subspace, std::min(nev, subspace - 1), opts.arnoldi_tol,
              opts.max_restarts);
  double mu_max = 0.0;
  for (const RitzPair& rp : ar.pairs) mu_max = std::max(mu_max, std::abs(rp.value));
  for (const RitzPair& rp : ar.pairs) {
    if (std::abs(rp.value) <= 1e-10 * mu_max) continue;
    etas.push_back(sh + 1.0 / rp.value);
    vecs.push_back(rp.vector);
  }
}

}  // namespace

QuadraticSolveResult solve_quadratic_eta(double omega,
                                         const WaveVectorSplit& split,
                                         const PermittivityModel& model,
                                         const PlaneWaveSet& basis, int nev,
                                         const QuadraticOptions& opts) {
  QuadraticSolveResult out;
  out.admissibility = check_admissibility(split, omega, model);
  out.tau_used = split.tau;
  if (!out.admissibility.ok && opts.require_admissible)
    throw NoAdmissibleTau(omega);

  InvEpsilonTable local(0, 0.0);
  const InvEpsilonTable* table = opts.table;
  if (!table) {
    local = inv_epsilon_fourier(model, omega, basis.order(), opts.grid);
    table = &local;
  }

  SolveMethod method = opts.method;
  if (method == SolveMethod::Auto)
    method = (7 * basis.size() + 1 <= opts.dense_dim_limit) ? SolveMethod::Dense
                                                            : SolveMethod::Arnoldi;
  if (7 * basis.size() + 1 > 10000)
    throw DimensionTooLarge(
        "solve_quadratic_eta: dense pencil storage capped at dim 10^4");

  std::vector<Complex> etas;
  std::vector<Eigen::VectorXcd> vecs;
  WaveVectorSplit used = split;
  for (int attempt = 0;; ++attempt) {
    MixedBlockSystem sys =
        build_linearized_system(basis, used, omega, opts.M, *table);
    sys.meta.model_id = model.id;
    bool singular = false;
    try {
      if (method == SolveMethod::Dense)
        solve_pencil_dense(sys, etas, vecs);
      else
        solve_pencil_arnoldi(sys, opts.shift, nev, opts, etas, vecs);
    } catch (const SingularA&) {
      singular = true;
    } catch (const SingularFactor&) {
      singular = true;
    }
    if (singular) {
      if (attempt >= 1) throw SingularA("solve_quadratic_eta: singular after tau nudge");
      // Near a resonance of the beta-problem A can be singular; nudge tau.
      try {
        used = WaveVectorSplit(split.alpha0, split.alpha_hat, split.tau + 1e-3);
      } catch (const std::invalid_argument&) {
        used = WaveVectorSplit(split.alpha0, split.alpha_hat, split.tau - 1e-3);
      }
      out.tau_perturbed = true;
      out.tau_used = used.tau;
      etas.clear();
      vecs.clear();
      continue;
    }

    for (std::size_t i = 0; i < etas.size(); ++i) {
      EtaEigenpair pr =
          make_pair(sys, etas[i], vecs[i], opts, !out.admissibility.ok);
      if (accept_pair(pr, opts))
        out.pairs.push_back(std::move(pr));
      else
        ++out.rejected;
    }
    break;
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [&](const EtaEigenpair& a, const EtaEigenpair& b) {
              const double ia = std::abs(a.eta.imag());
              const double ib = std::abs(b.eta.imag());
              if (std::abs(ia - ib) > 1e-14) return ia < ib;
              return std::abs(a.eta - opts.shift) < std::abs(b.eta - opts.shift);
            });
  if (static_cast<int>(out.pairs.size()) > nev && method == SolveMethod::Dense)
    out.pairs.resize(nev);
  return out;
}

}  // namespace bloch
