#pragma once

#include <string>

#include "bloch/lattice.hpp"
#include "bloch/materials.hpp"

namespace bloch {

/// Coefficient layout of the linearized unknown
/// X = (u1 in C^{3m} | u2 in C^{3m} | p in C^m | s in C), dim = 7m+1.
struct FieldCoefficients {
  Eigen::VectorXcd u1, u2, p;
  Complex s{0.0, 0.0};

  static FieldCoefficients split_state(const Eigen::VectorXcd& x, int num_modes);
  Eigen::VectorXcd join() const;
};

struct SystemMeta {
  WaveVectorSplit split;
  double omega;
  double M;
  int order;
  std::string model_id;
};

/// The two block matrices of the linearized problem A X = -eta C X.
struct MixedBlockSystem {
  Eigen::MatrixXcd A, C;
  SystemMeta meta;
  int num_modes;

  int dim() const { return 7 * num_modes + 1; }
  int off_u1() const { return 0; }
  int off_u2() const { return 3 * num_modes; }
  int off_p() const { return 6 * num_modes; }
  int off_s() const { return 7 * num_modes; }
};

/// The four 1/eps-weighted coupling blocks, each 3m x 3m:
///   nn(I',I) = N_{I'}^H c(I'-I) N_I      (curl against curl)
///   ns(I',I) = N_{I'}^H c(I'-I) S        (alpha-cross against curl)
///   sn(I',I) = S^H      c(I'-I) N_I      (curl against alpha-cross)
///   ss(I',I) = S^H      c(I'-I) S        (alpha-cross against alpha-cross)
/// with S = i*cross(alpha_hat). The default entry point is the OpenMP
/// kernel; the serial variant is the reference kept for testing.
struct CouplingBlocks {
  Eigen::MatrixXcd nn, ns, sn, ss;
};

CouplingBlocks assemble_coupling_blocks(const PlaneWaveSet& basis,
                                        const WaveVectorSplit& split,
                                        const InvEpsilonTable& table);
CouplingBlocks assemble_coupling_blocks_serial(const PlaneWaveSet& basis,
                                               const WaveVectorSplit& split,
                                               const InvEpsilonTable& table);

/// Blocks of the form a1: u1_u1 = nn - omega^2*I (tested by v1),
/// u2_v1 = ns; the (u2,u2) block is M times the identity.
struct A1Blocks {
  Eigen::MatrixXcd u1_u1;
  Eigen::MatrixXcd u2_v1;
  double M;
};

/// Blocks of the form a2: u2_v1 = ss, u1_v1 = sn; the (u1,v2) block is
/// -M times the identity.
struct A2Blocks {
  Eigen::MatrixXcd u2_v1;
  Eigen::MatrixXcd u1_v1;
  double M;
};

A1Blocks assemble_a1(const PlaneWaveSet& basis, const WaveVectorSplit& split,
                     double omega, double M, const InvEpsilonTable& table);
A2Blocks assemble_a2(const PlaneWaveSet& basis, const WaveVectorSplit& split,
                     double M, const InvEpsilonTable& table);

/// b1 column block: mode-diagonal, i*gamma^I (3x1) against v1 of the same
/// mode. 3m x m.
Eigen::MatrixXcd assemble_b1(const PlaneWaveSet& basis,
                             const WaveVectorSplit& split);

/// b2 column block: mode-diagonal, i*alpha_hat. 3m x m.
Eigen::MatrixXcd assemble_b2(const PlaneWaveSet& basis, const Vec3& alpha_hat);

MixedBlockSystem build_linearized_system(const PlaneWaveSet& basis,
                                         const WaveVectorSplit& split,
                                         double omega, double M,
                                         const InvEpsilonTable& table);

}  // namespace bloch
