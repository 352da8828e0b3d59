#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "beamgap/bloch.hpp"
#include "beamgap/lattice.hpp"

using namespace beamgap;

namespace {

UnitCellGraph square() { return build_square_example(30.0, 0.2); }

}  // namespace

TEST(ReciprocalLattice, DualityHoldsForSkewedCells) {
  UnitCellGraph g = square();
  g.lattice_vectors = {Vec2{1.0, 0.0}, Vec2{0.3, 1.1}};
  auto [b1, b2] = reciprocal_vectors(g);
  EXPECT_NEAR(b1.dot(g.lattice_vectors[0]), 2 * M_PI, 1e-12);
  EXPECT_NEAR(b1.dot(g.lattice_vectors[1]), 0.0, 1e-12);
  EXPECT_NEAR(b2.dot(g.lattice_vectors[0]), 0.0, 1e-12);
  EXPECT_NEAR(b2.dot(g.lattice_vectors[1]), 2 * M_PI, 1e-12);
}

TEST(ReciprocalLattice, SquareZoneCorners) {
  UnitCellGraph g = square();
  EXPECT_NEAR(zone_corner(g, 'G').norm(), 0.0, 1e-14);
  EXPECT_NEAR((zone_corner(g, 'X') - Vec2{M_PI, 0.0}).norm(), 0.0, 1e-12);
  EXPECT_NEAR((zone_corner(g, 'M') - Vec2{M_PI, M_PI}).norm(), 0.0, 1e-12);
  EXPECT_THROW(zone_corner(g, 'Q'), config_error);
}

TEST(ZonePath, SamplesLegsAndClosesAtTheLastCorner) {
  UnitCellGraph g = square();
  auto path = zone_path(g, "GXMG", 4);
  ASSERT_EQ(path.size(), 13u);
  EXPECT_NEAR(path.front().coord, 0.0, 1e-14);
  EXPECT_NEAR(path.front().k.norm(), 0.0, 1e-14);
  EXPECT_NEAR((path[4].k - zone_corner(g, 'X')).norm(), 0.0, 1e-12);
  EXPECT_NEAR((path[8].k - zone_corner(g, 'M')).norm(), 0.0, 1e-12);
  EXPECT_NEAR(path.back().k.norm(), 0.0, 1e-12);
  for (size_t i = 1; i < path.size(); ++i)
    EXPECT_GE(path[i].coord, path[i - 1].coord);

  EXPECT_THROW(zone_path(g, "G", 4), config_error);
  EXPECT_THROW(zone_path(g, "GX", 0), config_error);
}

TEST(Dispersion, PeriodicEqualsUnitPhaseBloch) {
  UnitCellGraph g = square();
  MeshSpec mesh = make_mesh(g, 0.25);
  auto real_op = assemble<double>(g, mesh, Constraints::periodic());
  auto bloch_op = assemble<std::complex<double>>(
      g, mesh, Constraints::bloch({1.0, 0.0}, {1.0, 0.0}));

  Eigen::MatrixXcd kb(bloch_op.stiffness);
  Eigen::MatrixXd kp(real_op.stiffness);
  double scale = kp.cwiseAbs().maxCoeff();
  EXPECT_LE((kb.real() - kp).cwiseAbs().maxCoeff(), 1e-13 * scale);
  EXPECT_LE(kb.imag().cwiseAbs().maxCoeff(), 1e-13 * scale);

  Eigen::MatrixXcd mb(bloch_op.mass);
  Eigen::MatrixXd mp(real_op.mass);
  EXPECT_LE((mb.real() - mp).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE(mb.imag().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Dispersion, TimeReversalSymmetry) {
  UnitCellGraph g = square();
  for (Vec2 k : {Vec2{1.2, 0.5}, Vec2{-0.7, 2.9}, Vec2{3.1, -3.1}}) {
    Eigen::VectorXd lp = dispersion_at(g, k, 5, 0.2);
    Eigen::VectorXd lm = dispersion_at(g, -k, 5, 0.2);
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(lp[j], lm[j], 1e-10 * std::max(1.0, std::abs(lp[j])));
  }
}

TEST(Dispersion, TwoRigidModesAtZoneCenter) {
  UnitCellGraph g = square();
  Eigen::VectorXd lam = dispersion_at(g, Vec2::Zero(), 4, 0.2);
  EXPECT_NEAR(lam[0], 0.0, 1e-8);
  EXPECT_NEAR(lam[1], 0.0, 1e-8);
  EXPECT_GT(lam[2], 0.1);
  // Away from the zone center the translations cost energy.
  Eigen::VectorXd off = dispersion_at(g, Vec2{1.2, 0.5}, 2, 0.2);
  EXPECT_GT(off[0], 1e-3);
}

TEST(Dispersion, SpectrumIsNonNegative) {
  UnitCellGraph g = square();
  for (Vec2 k : {Vec2{0.4, 0.1}, Vec2{M_PI, M_PI}, Vec2{2.0, -1.0}}) {
    Eigen::VectorXd lam = dispersion_at(g, k, 8, 0.25);
    EXPECT_GE(lam.minCoeff(), -1e-9);
    for (int j = 1; j < lam.size(); ++j) EXPECT_GE(lam[j], lam[j - 1]);
  }
}

TEST(Dispersion, BandCountValidation) {
  UnitCellGraph g = square();
  EXPECT_THROW(dispersion_at(g, Vec2{0.1, 0.1}, 0, 0.25), config_error);
}

TEST(BandStructureTest, SweepShapeAndGapBookkeeping) {
  UnitCellGraph g = square();
  BandStructure bs = band_structure(g, "GXMG", 4, 4, 0.25);
  ASSERT_EQ(bs.path.size(), 13u);
  ASSERT_EQ(bs.bands.rows(), 13);
  ASSERT_EQ(bs.bands.cols(), 4);
  for (const auto& gap : bs.gaps) {
    EXPECT_LT(gap.lo, gap.hi);
    EXPECT_GE(gap.below_band, 1);
    EXPECT_LE(gap.below_band, 3);
    // A reported gap means no sampled eigenvalue lies inside it.
    for (int p = 0; p < bs.bands.rows(); ++p)
      for (int j = 0; j < bs.bands.cols(); ++j) {
        bool inside = bs.bands(p, j) > gap.lo + 1e-12 &&
                      bs.bands(p, j) < gap.hi - 1e-12;
        EXPECT_FALSE(inside);
      }
  }
}

TEST(ScaledOperator, MeshCountsComeFromTheUnscaledCell) {
  UnitCellGraph g = square();
  ScalingParams s = ScalingParams::with_default_contrast(0.125);
  auto asmb = assemble_scaled(g, s, Vec2{0.3, 0.2}, 0.25);
  MeshSpec reference = make_mesh(g, 0.25);
  ASSERT_EQ(asmb.mesh.elements_per_beam.size(), reference.elements_per_beam.size());
  for (size_t b = 0; b < reference.elements_per_beam.size(); ++b)
    EXPECT_EQ(asmb.mesh.elements_per_beam[b], reference.elements_per_beam[b]);
  // The assembled geometry is the shrunk cell.
  EXPECT_NEAR(asmb.graph.total_length(), s.epsilon * g.total_length(), 1e-12);
}

TEST(ScaledOperator, SmallestEigenvalueApproachesTheLimitModel) {
  // Independent anchor: the closed-form limit eigenvalue for this cell at
  // k = (1.2, 0.5) is 0.337878882323565; the scaled spectra must close in
  // on it as epsilon drops.
  UnitCellGraph g = square();
  const Vec2 k{1.2, 0.5};
  const double lam_limit = 0.337878882323565;

  double prev_dev = 1e9;
  for (double eps : {0.25, 0.125}) {
    ScalingParams s = ScalingParams::with_default_contrast(eps);
    auto asmb = assemble_scaled(g, s, k, 1.0 / 16);
    double lam = detail::pencil_eigenvalues(asmb)[0];
    double dev = std::abs(lam - lam_limit) / lam_limit;
    EXPECT_LT(dev, 0.06);
    EXPECT_LT(dev, prev_dev);
    prev_dev = dev;
  }
  EXPECT_LT(prev_dev, 0.015);
}

TEST(ScaledOperator, ContrastValidation) {
  UnitCellGraph g = square();
  ScalingParams s;
  s.epsilon = 0.0;
  s.contrast = 0.1;
  EXPECT_THROW(assemble_scaled(g, s, Vec2{0.1, 0.1}, 0.25), config_error);
}

TEST(ScaleGraph, ScalesPositionsLengthsAndPeriods) {
  UnitCellGraph g = square();
  UnitCellGraph gs = scale_graph(g, 0.25);
  EXPECT_NEAR(gs.beams[0].length, 0.25, 1e-14);
  EXPECT_NEAR(gs.lattice_vectors[0].x(), 0.25, 1e-14);
  EXPECT_NEAR((gs.vertices[0].pos - Vec2{0.125, 0.125}).norm(), 0.0, 1e-14);
  // Frames are directions and do not scale.
  EXPECT_NEAR(gs.beams[2].tangent.norm(), 1.0, 1e-14);
}
