#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "beamgap/homogenization.hpp"
#include "beamgap/lattice.hpp"

using namespace beamgap;

namespace {

UnitCellGraph square(const MaterialParams& stiff = {}) {
  return build_square_example(30.0, 0.2, stiff);
}

MaterialParams mat(double gamma, double eta, double kappa) {
  MaterialParams m;
  m.gamma = gamma;
  m.eta = eta;
  m.kappa = kappa;
  return m;
}

// Two crosses side by side in a doubled period: same lattice as the square
// example, expressed on the cell [0,2]x[0,1].  Effective properties must not
// depend on this relabeling, nor on which joint class gets pinned.
UnitCellGraph double_cross() {
  UnitCellGraph g;
  g.lattice_vectors = {Vec2{2.0, 0.0}, Vec2{0.0, 1.0}};
  g.vertices = {
      {0, Vec2{0.5, 0.5}, false}, {1, Vec2{1.5, 0.5}, false},
      {2, Vec2{2.5, 0.5}, false}, {3, Vec2{0.5, 1.5}, false},
      {4, Vec2{1.5, 1.5}, false},
  };
  g.identifications = {{0, 2, {1, 0}}, {0, 3, {0, 1}}, {1, 4, {0, 1}}};
  auto beam = [](int v0, int v1, const Vec2& t) {
    Beam b;
    b.start_vertex = v0;
    b.end_vertex = v1;
    b.length = 1.0;
    b.tangent = t;
    b.normal = rotate90(t);
    b.component = Component::Stiff;
    return b;
  };
  g.beams = {beam(0, 1, Vec2{1, 0}), beam(1, 2, Vec2{1, 0}),
             beam(0, 3, Vec2{0, 1}), beam(1, 4, Vec2{0, 1})};
  validate_graph(g);
  return g;
}

// Section rotation of the shear corrector along a cross arm, arclength
// t in [0,1] from the junction.  Piecewise quadratic, -1/2 at the joints.
double shear_rotation(double t, double eta, double kappa) {
  double al = 6.0 * eta / (12.0 * eta + kappa);
  double m = std::min(t, 1.0 - t) - 0.5;
  return -0.5 * al * (kappa / eta) * m * m + 0.125 * al * (kappa / eta) - 0.5;
}

double shear_profile_error(const MaterialParams& stiff, double h) {
  CellCorrector cc = solve_cell_problem(square(stiff), 1, 2, h);
  int nel = cc.assembly.mesh.elements_per_beam[0];
  double sup = 0;
  for (int i = 0; i <= nel; ++i) {
    double t = double(i) / nel;
    sup = std::max(sup, std::abs(cc.node_value(0, i)[2] -
                                 shear_rotation(t, stiff.eta, stiff.kappa)));
  }
  return sup;
}

}  // namespace

TEST(SquareTensor, MatchesTheClosedCross) {
  HomogenizedTensor ct = homogenized_tensor(square(), 1.0 / 64.0);
  EXPECT_NEAR(ct(1, 1, 1, 1), 1.0, 1e-12);
  EXPECT_NEAR(ct(2, 2, 2, 2), 1.0, 1e-12);
  EXPECT_NEAR(ct(1, 1, 2, 2), 0.0, 1e-12);
  EXPECT_NEAR(ct(1, 1, 1, 2), 0.0, 1e-12);
  EXPECT_NEAR(ct(1, 2, 2, 2), 0.0, 1e-12);
  double shear = 6.0 / 13.0;
  EXPECT_NEAR(ct(1, 2, 1, 2), shear, 2.5e-5 * shear);
}

TEST(SquareTensor, RandomMaterialsFollowTheSeriesFormula) {
  std::mt19937 rng(20240917u);
  std::uniform_real_distribution<double> pick(0.5, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    MaterialParams m = mat(pick(rng), pick(rng), pick(rng));
    HomogenizedTensor ct = homogenized_tensor(square(m), 1.0 / 64.0);
    HomogenizedTensor ref = closed_form_tensor(m);
    EXPECT_NEAR(ct(1, 1, 1, 1), m.gamma, 1e-10 * m.gamma);
    double shear = ref(1, 2, 1, 2);
    EXPECT_NEAR(ct(1, 2, 1, 2), shear, 1e-4 * shear)
        << "gamma=" << m.gamma << " eta=" << m.eta << " kappa=" << m.kappa;
  }
}

TEST(SquareTensor, ShearEntryConvergesAtSecondOrder) {
  double shear = 6.0 / 13.0;
  double err[3];
  for (int i = 0; i < 3; ++i) {
    double h = 1.0 / (16 << i);
    err[i] = std::abs(homogenized_tensor(square(), h)(1, 2, 1, 2) - shear);
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.8);
}

TEST(SquareTensor, PinChoiceDoesNotMatter) {
  UnitCellGraph g2 = double_cross();
  double h = 1.0 / 32.0;
  HomogenizedTensor ta = homogenized_tensor(g2, h, 0);
  HomogenizedTensor tb = homogenized_tensor(g2, h, 1);
  HomogenizedTensor single = homogenized_tensor(square(), h);
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          EXPECT_NEAR(ta(j, l, p, q), tb(j, l, p, q), 1e-10);
          EXPECT_NEAR(ta(j, l, p, q), single(j, l, p, q), 1e-10);
        }
}

TEST(Correctors, ShearRotationIsPiecewiseQuadratic) {
  MaterialParams m;
  CellCorrector cc = solve_cell_problem(square(m), 1, 2, 1.0 / 64.0);
  int nel = cc.assembly.mesh.elements_per_beam[0];
  EXPECT_NEAR(cc.node_value(0, 0)[2], -0.5, 1e-6);
  EXPECT_NEAR(cc.node_value(0, nel)[2], -0.5, 1e-6);
  EXPECT_LE(shear_profile_error(m, 1.0 / 64.0), 2e-6);
}

TEST(Correctors, ShearRotationConvergesAtSecondOrder) {
  MaterialParams m = mat(2.0, 3.0, 4.0);
  double err[3];
  for (int i = 0; i < 3; ++i) err[i] = shear_profile_error(m, 1.0 / (16 << i));
  EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.8);
}

TEST(Correctors, AxialStrainsRelaxToNothing) {
  UnitCellGraph g = square();
  EXPECT_LE(solve_cell_problem(g, 1, 1, 1.0 / 32.0).corrector.norm(), 1e-10);
  EXPECT_LE(solve_cell_problem(g, 2, 2, 1.0 / 32.0).corrector.norm(), 1e-10);
}

TEST(Correctors, TransposedDyadMirrorsAcrossTheDiagonal) {
  UnitCellGraph g = square();
  double h = 1.0 / 32.0;
  CellCorrector c12 = solve_cell_problem(g, 1, 2, h);
  CellCorrector c21 = solve_cell_problem(g, 2, 1, h);
  int nel = c12.assembly.mesh.elements_per_beam[0];
  for (int i = 0; i <= nel; ++i) {
    Eigen::Vector3d d = c21.node_value(1, i) + c12.node_value(0, i);
    EXPECT_LE(d.norm(), 1e-12) << "node " << i;
  }
}

TEST(Correctors, SolveIsStationary) {
  CellCorrector cc = solve_cell_problem(square(), 1, 2, 1.0 / 32.0);
  const Eigen::VectorXd& x = cc.corrector;
  Eigen::VectorXd r = cc.assembly.stiffness * x - cc.source;
  double scale = (cc.assembly.stiffness * x).norm() + cc.source.norm();
  auto energy = [&](const Eigen::VectorXd& w) {
    return 0.5 * w.dot(cc.assembly.stiffness * w) - cc.source.dot(w);
  };
  std::mt19937 rng(7u);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd v(x.size());
    for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    v.normalize();
    EXPECT_LE(std::abs(v.dot(r)) / scale, 1e-8);
    EXPECT_GE(energy(x + v), energy(x) - 1e-8 * (std::abs(energy(x)) + 1.0));
  }
}

TEST(TensorStructure, SymmetriesHoldToRoundoff) {
  TensorDiagnostics diag;
  HomogenizedTensor ct = homogenized_tensor(square(), 1.0 / 32.0, -1, &diag);
  EXPECT_LE(diag.major_asymmetry, 1e-12);
  EXPECT_LE(diag.minor_asymmetry, 1e-12);
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          EXPECT_DOUBLE_EQ(ct(j, l, p, q), ct(p, q, j, l));
          EXPECT_DOUBLE_EQ(ct(j, l, p, q), ct(l, j, p, q));
        }
  // An antisymmetric macroscopic gradient is a rotation; it must carry no
  // effective energy.
  double e[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};
  double w = 0;
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q)
          w += ct(j, l, p, q) * e[j - 1][l - 1] * e[p - 1][q - 1];
  EXPECT_LE(std::abs(w), 1e-10);
}

TEST(TensorStructure, VoigtViewMatchesEntries) {
  HomogenizedTensor ct = homogenized_tensor(square(), 1.0 / 16.0);
  Eigen::Matrix3d v = ct.voigt();
  EXPECT_DOUBLE_EQ(v(0, 0), ct(1, 1, 1, 1));
  EXPECT_DOUBLE_EQ(v(1, 1), ct(2, 2, 2, 2));
  EXPECT_DOUBLE_EQ(v(2, 2), ct(1, 2, 1, 2));
  EXPECT_DOUBLE_EQ(v(0, 1), ct(1, 1, 2, 2));
  EXPECT_DOUBLE_EQ(v(0, 1), v(1, 0));
}

TEST(ClosedCross, SeriesShearFormula) {
  EXPECT_NEAR(closed_form_tensor(mat(1, 1, 1))(1, 2, 1, 2), 6.0 / 13.0, 1e-15);
  EXPECT_NEAR(closed_form_tensor(mat(2, 1.0 / 3.0, 2.5))(1, 2, 1, 2), 10.0 / 13.0,
              1e-14);
  EXPECT_NEAR(closed_form_tensor(mat(2, 3, 4))(1, 2, 1, 2), 1.8, 1e-14);
  // Rigid bending: the series couple degenerates to pure shear kappa/2.
  EXPECT_NEAR(closed_form_tensor(mat(1, 1e8, 1))(1, 2, 1, 2), 0.5, 1e-8);
  EXPECT_DOUBLE_EQ(closed_form_tensor(mat(2, 3, 4))(1, 1, 2, 2), 0.0);
  EXPECT_DOUBLE_EQ(closed_form_tensor(mat(2, 3, 4))(1, 1, 1, 1), 2.0);
}

TEST(Validation, RejectsCellsWithoutStiffBeams) {
  UnitCellGraph seg = build_soft_segment(30.0, 0.5);
  EXPECT_THROW(homogenized_tensor(seg, 0.01), structure_error);
  EXPECT_THROW(solve_cell_problem(square(), 3, 1, 0.1), config_error);
  EXPECT_THROW(solve_cell_problem(square(), 1, 0, 0.1), config_error);
}
