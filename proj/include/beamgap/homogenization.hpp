#pragma once

// Effective elasticity of the stiff skeleton: periodic cell correctors for
// unit macroscopic strains and the homogenized tensor from corrector
// energies.  Only the stiff component enters; soft beams are dropped.
//
// The corrector for the strain dyad e_j (x) e_l relaxes the affine field
// u(y) = y_l e_j, whose beam-local strains are: axial tau_j tau_l, shear
// n_j tau_l, bending zero.  Pure rotations (antisymmetric dyads) relax to
// exactly zero energy through a constant section rotation, so the tensor
// gains minor symmetry without symmetrizing the sources.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "beamgap/assembly.hpp"
#include "beamgap/element.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/mesh.hpp"

namespace beamgap {

struct HomogenizedTensor {
  // Storage is 0-based; accessors are 1-based to read like the math.
  std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> c{};

  double& at(int j, int l, int p, int q) { return c[j - 1][l - 1][p - 1][q - 1]; }
  double operator()(int j, int l, int p, int q) const {
    return c[j - 1][l - 1][p - 1][q - 1];
  }

  // Voigt matrix for the strain vector (e11, e22, 2 e12).
  Eigen::Matrix3d voigt() const {
    Eigen::Matrix3d v;
    v << (*this)(1, 1, 1, 1), (*this)(1, 1, 2, 2), (*this)(1, 1, 1, 2),
        (*this)(1, 1, 2, 2), (*this)(2, 2, 2, 2), (*this)(2, 2, 1, 2),
        (*this)(1, 1, 1, 2), (*this)(2, 2, 1, 2), (*this)(1, 2, 1, 2);
    return v;
  }
};

namespace detail {

// Beam-local strains of the affine field for the dyad e_j (x) e_l (1-based).
inline std::pair<double, double> affine_strains(const Beam& b, int j, int l) {
  double tj = j == 1 ? b.tangent.x() : b.tangent.y();
  double tl = l == 1 ? b.tangent.x() : b.tangent.y();
  double nj = j == 1 ? b.normal.x() : b.normal.y();
  return {tj * tl, nj * tl};
}

inline void check_strain_index(int j, const char* name) {
  if (j != 1 && j != 2)
    throw config_error(std::string("strain index ") + name + " must be 1 or 2");
}

// Load vector of the relaxation problem: f_i = -a(affine field, w_i).
inline Eigen::VectorXd cell_source(const Assembly<double>& asmb, int j, int l) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(asmb.n_dofs);
  for (size_t b = 0; b < asmb.graph.beams.size(); ++b) {
    const Beam& beam = asmb.graph.beams[b];
    double he = asmb.element_size(static_cast<int>(b));
    auto [sa, ss] = affine_strains(beam, j, l);
    const ElementRows rows = element_rows(he);
    Vec6 re = -he * (beam.material.gamma * sa * rows.ba +
                     beam.material.kappa * ss * rows.bs);
    int nel = asmb.mesh.elements_per_beam[b];
    for (int e = 0; e < nel; ++e)
      for (int side = 0; side < 2; ++side) {
        const NodeMap<double>& nm = asmb.node_maps[b][e + side];
        for (int c = 0; c < 3; ++c) {
          if (nm.dof[c] < 0) continue;
          f[nm.dof[c]] += nm.coeff.col(c).dot(re.segment<3>(3 * side));
        }
      }
  }
  return f;
}

// Default translation pin: both displacement components of the joint class
// with the smallest representative id.
inline std::vector<std::pair<int, int>> default_pins(const UnitCellGraph& g) {
  VertexClasses cls(g);
  int rep = -1;
  for (const auto& v : g.vertices) {
    int r = cls.resolve(v.id).first;
    if (rep < 0 || r < rep) rep = r;
  }
  if (rep < 0) throw structure_error("cell problem needs at least one vertex");
  return {{rep, 0}, {rep, 1}};
}

}  // namespace detail

// One periodic cell corrector together with its operator and load, kept
// around so callers can sample profiles and check stationarity.
struct CellCorrector {
  int j = 0, l = 0;
  Assembly<double> assembly;
  Eigen::VectorXd corrector;
  Eigen::VectorXd source;

  // Beam-local (u, v, theta) of the corrector at a mesh node.
  Eigen::Vector3d node_value(int beam, int node) const {
    const NodeMap<double>& nm = assembly.node_maps[beam][node];
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    for (int c = 0; c < 3; ++c)
      if (nm.dof[c] >= 0) u += nm.coeff.col(c) * corrector[nm.dof[c]];
    return u;
  }
};

inline CellCorrector solve_cell_problem(const UnitCellGraph& g, int j, int l,
                                        double h, int pin_vertex = -1) {
  detail::check_strain_index(j, "j");
  detail::check_strain_index(l, "l");
  UnitCellGraph gs = stiff_subgraph(g);
  if (gs.beams.empty()) throw structure_error("graph has no stiff beams");

  Constraints con = Constraints::periodic();
  con.pins = pin_vertex < 0 ? detail::default_pins(gs)
                            : std::vector<std::pair<int, int>>{{pin_vertex, 0},
                                                               {pin_vertex, 1}};

  CellCorrector cc;
  cc.j = j;
  cc.l = l;
  cc.assembly = assemble<double>(gs, make_mesh(gs, h), con);
  cc.source = detail::cell_source(cc.assembly, j, l);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(cc.assembly.stiffness);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error("cell stiffness factorization failed");
  cc.corrector = ldlt.solve(cc.source);
  return cc;
}

struct TensorDiagnostics {
  double major_asymmetry = 0;  // max |C_jlpq - C_pqjl| before symmetrizing
  double minor_asymmetry = 0;  // max |C_jlpq - C_ljpq|
};

inline HomogenizedTensor homogenized_tensor(const UnitCellGraph& g, double h,
                                            int pin_vertex = -1,
                                            TensorDiagnostics* diag = nullptr) {
  UnitCellGraph gs = stiff_subgraph(g);
  if (gs.beams.empty()) throw structure_error("graph has no stiff beams");

  Constraints con = Constraints::periodic();
  con.pins = pin_vertex < 0 ? detail::default_pins(gs)
                            : std::vector<std::pair<int, int>>{{pin_vertex, 0},
                                                               {pin_vertex, 1}};
  Assembly<double> asmb = assemble<double>(gs, make_mesh(gs, h), con);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(asmb.stiffness);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error("cell stiffness factorization failed");

  // Correctors for the four dyads, one factorization.
  std::array<Eigen::VectorXd, 4> x;
  auto idx = [](int j, int l) { return 2 * (j - 1) + (l - 1); };
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      x[idx(j, l)] = ldlt.solve(detail::cell_source(asmb, j, l));

  const double cell_area =
      std::abs(gs.lattice_vectors[0].x() * gs.lattice_vectors[1].y() -
               gs.lattice_vectors[0].y() * gs.lattice_vectors[1].x());

  HomogenizedTensor ct;
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          double energy = 0.0;
          for (size_t b = 0; b < gs.beams.size(); ++b) {
            const Beam& beam = asmb.graph.beams[b];
            double he = asmb.element_size(static_cast<int>(b));
            const ElementRows rows = element_rows(he);
            auto [sa1, ss1] = detail::affine_strains(beam, j, l);
            auto [sa2, ss2] = detail::affine_strains(beam, p, q);
            int nel = asmb.mesh.elements_per_beam[b];
            for (int e = 0; e < nel; ++e) {
              Vec6 u1 = asmb.gather(static_cast<int>(b), e, x[idx(j, l)]);
              Vec6 u2 = asmb.gather(static_cast<int>(b), e, x[idx(p, q)]);
              double a1 = rows.ba.dot(u1) + sa1, a2 = rows.ba.dot(u2) + sa2;
              double b1 = rows.bb.dot(u1), b2 = rows.bb.dot(u2);
              double s1 = rows.bs.dot(u1) + ss1, s2 = rows.bs.dot(u2) + ss2;
              energy += he * (beam.material.gamma * a1 * a2 +
                              beam.material.eta * b1 * b2 +
                              beam.material.kappa * s1 * s2);
            }
          }
          ct.at(j, l, p, q) = energy / cell_area;
        }

  // The energy form is symmetric, so any asymmetry here is solver failure.
  double scale = std::abs(ct(1, 1, 1, 1)) + std::abs(ct(1, 2, 1, 2)) + 1.0;
  double major = 0.0, minor = 0.0;
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          major = std::max(major, std::abs(ct(j, l, p, q) - ct(p, q, j, l)));
          minor = std::max(minor, std::abs(ct(j, l, p, q) - ct(l, j, p, q)));
        }
  if (diag) {
    diag->major_asymmetry = major;
    diag->minor_asymmetry = minor;
  }
  if (major > 1e-10 * scale)
    throw numeric_error("homogenized tensor lost major symmetry");
  for (int j = 1; j <= 2; ++j)
    for (int l = 1; l <= 2; ++l)
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          double s = 0.5 * (ct(j, l, p, q) + ct(p, q, j, l));
          ct.at(j, l, p, q) = s;
          ct.at(p, q, j, l) = s;
        }
  return ct;
}

// Closed-form tensor of the square stiff cross (two orthogonal unit-period
// beams of one material): axial moduli pass straight through, the shear
// modulus is the series coupling of bending and shear compliance.
inline HomogenizedTensor closed_form_tensor(const MaterialParams& stiff) {
  stiff.validate();
  HomogenizedTensor ct;
  double shear = 6.0 * stiff.eta * stiff.kappa / (12.0 * stiff.eta + stiff.kappa);
  ct.at(1, 1, 1, 1) = stiff.gamma;
  ct.at(2, 2, 2, 2) = stiff.gamma;
  ct.at(1, 2, 1, 2) = shear;
  ct.at(1, 2, 2, 1) = shear;
  ct.at(2, 1, 1, 2) = shear;
  ct.at(2, 1, 2, 1) = shear;
  return ct;
}

}  // namespace beamgap
