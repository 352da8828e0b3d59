#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "beamgap/element.hpp"
#include "beamgap/lattice.hpp"

using namespace beamgap;

TEST(ElementRowsTest, StrainRowsAtUnitScale) {
  double h = 0.25;
  ElementRows r = element_rows(h);
  Vec6 ba_expect, bb_expect, bs_expect;
  ba_expect << -4, 0, 0, 4, 0, 0;
  bb_expect << 0, 0, -4, 0, 0, 4;
  bs_expect << 0, -4, -0.5, 0, 4, -0.5;
  EXPECT_NEAR((r.ba - ba_expect).norm(), 0.0, 1e-14);
  EXPECT_NEAR((r.bb - bb_expect).norm(), 0.0, 1e-14);
  EXPECT_NEAR((r.bs - bs_expect).norm(), 0.0, 1e-14);
}

TEST(ElementRowsTest, RotationScaleEntersShearOnly) {
  ElementRows r = element_rows(0.5, 8.0);
  EXPECT_NEAR(r.bs[2], -4.0, 1e-14);
  EXPECT_NEAR(r.bs[5], -4.0, 1e-14);
  EXPECT_NEAR(r.ba[0], -2.0, 1e-14);
  EXPECT_NEAR(r.bb[2], -2.0, 1e-14);
}

TEST(ElementMatrices, RigidMotionsCarryNoStrainEnergy) {
  MaterialParams m;
  m.gamma = 2.0;
  m.eta = 0.7;
  m.kappa = 3.0;
  double h = 0.125;
  auto [ke, me] = element_matrices(m, h);

  Vec6 axial, transverse, spin;
  axial << 1, 0, 0, 1, 0, 0;
  transverse << 0, 1, 0, 0, 1, 0;
  // Rotation about the element midpoint: v = theta (x - h/2).
  spin << 0, -h / 2, 1, 0, h / 2, 1;
  EXPECT_NEAR((ke * axial).norm(), 0.0, 1e-13);
  EXPECT_NEAR((ke * transverse).norm(), 0.0, 1e-13);
  EXPECT_NEAR((ke * spin).norm(), 0.0, 1e-13);
}

TEST(ElementMatrices, StiffnessIsPositiveSemiDefinite) {
  MaterialParams m;
  m.eta = 0.2;
  m.kappa = 5.0;
  auto [ke, me] = element_matrices(m, 0.3);
  Eigen::SelfAdjointEigenSolver<Mat6> es(ke);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  EXPECT_NEAR((ke - ke.transpose()).norm(), 0.0, 1e-14);
}

TEST(ElementMatrices, MassTotalsMatchTheBeamSlice) {
  MaterialParams m;
  m.density = 2.5;
  m.rotary_inertia = 0.8;
  double h = 0.35;
  auto [ke, me] = element_matrices(m, h);

  Vec6 axial, transverse, spin;
  axial << 1, 0, 0, 1, 0, 0;
  transverse << 0, 1, 0, 0, 1, 0;
  spin << 0, 0, 1, 0, 0, 1;
  EXPECT_NEAR(axial.dot(me * axial), m.density * h, 1e-13);
  EXPECT_NEAR(transverse.dot(me * transverse), m.density * h, 1e-13);
  EXPECT_NEAR(spin.dot(me * spin), m.rotary_inertia * h, 1e-13);
  EXPECT_NEAR((me - me.transpose()).norm(), 0.0, 1e-14);
}

TEST(ElementMatrices, ScaledVersionRescalesRotationAndPrefactors) {
  MaterialParams m;
  m.gamma = 1.5;
  m.eta = 0.9;
  m.kappa = 2.0;
  double h = 0.2, eps = 0.125, sf = 0.015625;
  auto [ke, me] = element_matrices_scaled(m, h, eps, sf);

  ElementRows r = element_rows(h, 1.0 / eps);
  Mat6 ke_expect = eps * sf *
                   (m.gamma * h * r.ba * r.ba.transpose() +
                    m.eta * h * r.bb * r.bb.transpose() +
                    m.kappa * h * r.bs * r.bs.transpose());
  auto [ke_phys, me_phys] = element_matrices(m, h);
  EXPECT_NEAR((ke - ke_expect).norm(), 0.0, 1e-13 * ke_expect.norm());
  EXPECT_NEAR((me - eps * me_phys).norm(), 0.0, 1e-14 * me_phys.norm());
}

TEST(NodeFrame, MapsGlobalToLocal) {
  double c = std::cos(0.7), s = std::sin(0.7);
  Vec2 t{c, s};
  Eigen::Matrix3d T = node_frame(t, rotate90(t));
  // The tangent itself must come out as the local first axis.
  Eigen::Vector3d g1(c, s, 0.4);
  Eigen::Vector3d l1 = T * g1;
  EXPECT_NEAR(l1[0], 1.0, 1e-14);
  EXPECT_NEAR(l1[1], 0.0, 1e-14);
  EXPECT_NEAR(l1[2], 0.4, 1e-14);
  EXPECT_NEAR((T * T.transpose() - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-14);
}

TEST(ElementFrame, BlockDiagonalPerNode) {
  UnitCellGraph g = build_square_example(40.0, 0.1);
  const Beam& soft = g.beams[2];
  Mat6 T = element_frame(soft);
  Eigen::Matrix3d T3 = node_frame(soft.tangent, soft.normal);
  EXPECT_NEAR((T.block(0, 0, 3, 3) - T3).norm(), 0.0, 1e-14);
  EXPECT_NEAR((T.block(3, 3, 3, 3) - T3).norm(), 0.0, 1e-14);
  EXPECT_NEAR(T.block(0, 3, 3, 3).norm(), 0.0, 1e-14);
}
