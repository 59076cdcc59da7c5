#include "bloch/assembly.hpp"

namespace bloch {

FieldCoefficients FieldCoefficients::split_state(const Eigen::VectorXcd& x,
                                                 int m) {
  if (x.size() != 7 * m + 1)
    throw std::invalid_argument("FieldCoefficients: state size mismatch");
  FieldCoefficients f;
  f.u1 = x.segment(0, 3 * m);
  f.u2 = x.segment(3 * m, 3 * m);
  f.p = x.segment(6 * m, m);
  f.s = x(7 * m);
  return f;
}

Eigen::VectorXcd FieldCoefficients::join() const {
  const int m = static_cast<int>(p.size());
  Eigen::VectorXcd x(7 * m + 1);
  x.segment(0, 3 * m) = u1;
  x.segment(3 * m, 3 * m) = u2;
  x.segment(6 * m, m) = p;
  x(7 * m) = s;
  return x;
}

namespace {

void fill_row_block(int row, const PlaneWaveSet& basis,
                    const std::vector<Mat3c>& curl_mats, const Mat3c& s_mat,
                    const InvEpsilonTable& table, CouplingBlocks& out) {
  const Mat3c nh = curl_mats[row].adjoint();
  const Mat3c sh = s_mat.adjoint();
  const IVec3 irow = basis.index(row);
  for (int col = 0; col < basis.size(); ++col) {
    const Complex c = table.coeff(irow - basis.index(col));
    out.nn.block<3, 3>(3 * row, 3 * col) = c * (nh * curl_mats[col]);
    out.ns.block<3, 3>(3 * row, 3 * col) = c * (nh * s_mat);
    out.sn.block<3, 3>(3 * row, 3 * col) = c * (sh * curl_mats[col]);
    out.ss.block<3, 3>(3 * row, 3 * col) = c * (sh * s_mat);
  }
}

CouplingBlocks assemble_coupling_impl(const PlaneWaveSet& basis,
                                      const WaveVectorSplit& split,
                                      const InvEpsilonTable& table,
                                      bool parallel) {
  if (table.order() < basis.order())
    throw MissingCoefficient(
        "assemble_coupling_blocks: table order below basis order");
  const int m = basis.size();
  CouplingBlocks out;
  out.nn.resize(3 * m, 3 * m);
  out.ns.resize(3 * m, 3 * m);
  out.sn.resize(3 * m, 3 * m);
  out.ss.resize(3 * m, 3 * m);

  std::vector<Mat3c> curl_mats(m);
  for (int i = 0; i < m; ++i)
    curl_mats[i] = curl_matrix(gamma_of(split, basis.mode(i)));
  const Mat3c s_mat = curl_matrix(split.alpha_hat);

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int row = 0; row < m; ++row)
      fill_row_block(row, basis, curl_mats, s_mat, table, out);
  } else {
    for (int row = 0; row < m; ++row)
      fill_row_block(row, basis, curl_mats, s_mat, table, out);
  }
  return out;
}

}  // namespace

CouplingBlocks assemble_coupling_blocks(const PlaneWaveSet& basis,
                                        const WaveVectorSplit& split,
                                        const InvEpsilonTable& table) {
  return assemble_coupling_impl(basis, split, table, true);
}

CouplingBlocks assemble_coupling_blocks_serial(const PlaneWaveSet& basis,
                                               const WaveVectorSplit& split,
                                               const InvEpsilonTable& table) {
  return assemble_coupling_impl(basis, split, table, false);
}

A1Blocks assemble_a1(const PlaneWaveSet& basis, const WaveVectorSplit& split,
                     double omega, double M, const InvEpsilonTable& table) {
  CouplingBlocks cb = assemble_coupling_blocks(basis, split, table);
  A1Blocks out{std::move(cb.nn), std::move(cb.ns), M};
  out.u1_u1.diagonal().array() -= omega * omega;
  return out;
}

A2Blocks assemble_a2(const PlaneWaveSet& basis, const WaveVectorSplit& split,
                     double M, const InvEpsilonTable& table) {
  CouplingBlocks cb = assemble_coupling_blocks(basis, split, table);
  return A2Blocks{std::move(cb.ss), std::move(cb.sn), M};
}

Eigen::MatrixXcd assemble_b1(const PlaneWaveSet& basis,
                             const WaveVectorSplit& split) {
  const int m = basis.size();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(3 * m, m);
  const Complex i(0.0, 1.0);
  for (int mode = 0; mode < m; ++mode) {
    const Vec3 g = gamma_of(split, basis.mode(mode));
    b.block<3, 1>(3 * mode, mode) = i * g.cast<Complex>();
  }
  return b;
}

Eigen::MatrixXcd assemble_b2(const PlaneWaveSet& basis, const Vec3& alpha_hat) {
  const int m = basis.size();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(3 * m, m);
  const Complex i(0.0, 1.0);
  for (int mode = 0; mode < m; ++mode)
    b.block<3, 1>(3 * mode, mode) = i * alpha_hat.cast<Complex>();
  return b;
}

MixedBlockSystem build_linearized_system(const PlaneWaveSet& basis,
                                         const WaveVectorSplit& split,
                                         double omega, double M,
                                         const InvEpsilonTable& table) {
  const int m = basis.size();
  const int dim = 7 * m + 1;
  const int u1 = 0, u2 = 3 * m, p = 6 * m, s = 7 * m;
  const int mode0 = basis.position(IVec3(0, 0, 0));

  CouplingBlocks cb = assemble_coupling_blocks(basis, split, table);
  const Eigen::MatrixXcd b1 = assemble_b1(basis, split);
  const Eigen::MatrixXcd b2 = assemble_b2(basis, split.alpha_hat);

  MixedBlockSystem sys{Eigen::MatrixXcd::Zero(dim, dim),
                       Eigen::MatrixXcd::Zero(dim, dim),
                       SystemMeta{split, omega, M, basis.order(), {}},
                       m};

  // A: rows v1 get a1's curl-curl part, a1's u2 coupling, and b1.
  sys.A.block(u1, u1, 3 * m, 3 * m) = cb.nn;
  sys.A.block(u1, u1, 3 * m, 3 * m).diagonal().array() -= omega * omega;
  sys.A.block(u1, u2, 3 * m, 3 * m) = cb.ns;
  sys.A.block(u1, p, 3 * m, m) = b1;
  // rows v2: M*(u2,v2).
  sys.A.block(u2, u2, 3 * m, 3 * m) =
      M * Eigen::MatrixXcd::Identity(3 * m, 3 * m);
  // rows q: conjugate transpose of the b1 column plus the (q,s) coupling.
  sys.A.block(p, u1, m, 3 * m) = b1.adjoint();
  sys.A(p + mode0, s) = 1.0;
  // row t: the (p,t) coupling against the mode-0 coefficient of p.
  sys.A(s, p + mode0) = 1.0;

  // C: rows v1 get a2's couplings and b2.
  sys.C.block(u1, u1, 3 * m, 3 * m) = cb.sn;
  sys.C.block(u1, u2, 3 * m, 3 * m) = cb.ss;
  sys.C.block(u1, p, 3 * m, m) = b2;
  // rows v2: -M*(u1,v2).
  sys.C.block(u2, u1, 3 * m, 3 * m) =
      -M * Eigen::MatrixXcd::Identity(3 * m, 3 * m);
  // rows q: conjugate transpose of the b2 column.
  sys.C.block(p, u1, m, 3 * m) = b2.adjoint();

  return sys;
}

}  // namespace bloch
