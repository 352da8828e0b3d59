#pragma once

// Two-node beam element in local coordinates (u along the axis, v transverse,
// theta the cross-section rotation).  Nodal order: (u0, v0, th0, u1, v1, th1).
//
// Stiffness uses linear shape functions throughout with the shear strain
// v' - theta evaluated at the element midpoint.  That one-point rule on the
// shear term is what keeps the element usable in the thin limit; integrating
// the shear energy exactly with linear shapes locks the mesh.
//
// Mass is the consistent linear-shape matrix: (h/6) [[2,1],[1,2]] per field,
// weighted by density for u and v and rotary inertia for theta.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "beamgap/lattice.hpp"

namespace beamgap {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Strain-displacement rows for one element of length h.  "a" is the axial
// stretch u', "b" the bending curvature theta', "s" the midpoint shear
// v' - theta.  theta_scale multiplies the rotation wherever it enters the
// shear strain; the unscaled element has theta_scale = 1.
struct ElementRows {
  Vec6 ba, bb, bs;
};

inline ElementRows element_rows(double h, double theta_scale = 1.0) {
  ElementRows r;
  const double ih = 1.0 / h;
  r.ba << -ih, 0, 0, ih, 0, 0;
  r.bb << 0, 0, -ih, 0, 0, ih;
  r.bs << 0, -ih, -0.5 * theta_scale, 0, ih, -0.5 * theta_scale;
  return r;
}

// Stiffness and consistent mass for one element of length h.
inline std::pair<Mat6, Mat6> element_matrices(const MaterialParams& m, double h) {
  const ElementRows r = element_rows(h);
  Mat6 ke = m.gamma * h * (r.ba * r.ba.transpose()) +
            m.eta * h * (r.bb * r.bb.transpose()) +
            m.kappa * h * (r.bs * r.bs.transpose());

  Mat6 me = Mat6::Zero();
  const double c0 = h / 3.0, c1 = h / 6.0;
  const std::array<double, 3> w = {m.density, m.density, m.rotary_inertia};
  for (int f = 0; f < 3; ++f) {
    me(f, f) = c0 * w[f];
    me(f + 3, f + 3) = c0 * w[f];
    me(f, f + 3) = c1 * w[f];
    me(f + 3, f) = c1 * w[f];
  }
  return {ke, me};
}

// Element matrices for the contrast-scaled operator.  Both components carry
// the mesh-scale factor epsilon in front of stiffness and mass; the soft
// component is additionally damped by the contrast delta.  The rotation in
// the shear strain picks up the factor 1/epsilon because physical rotations
// couple to displacements over the cell size, not the macro length.
inline std::pair<Mat6, Mat6> element_matrices_scaled(const MaterialParams& m,
                                                     double h, double epsilon,
                                                     double stiffness_factor) {
  const ElementRows r = element_rows(h, 1.0 / epsilon);
  const double sf = epsilon * stiffness_factor;
  Mat6 ke = sf * (m.gamma * h * (r.ba * r.ba.transpose()) +
                  m.eta * h * (r.bb * r.bb.transpose()) +
                  m.kappa * h * (r.bs * r.bs.transpose()));

  Mat6 me = Mat6::Zero();
  const double c0 = h / 3.0, c1 = h / 6.0;
  const std::array<double, 3> w = {m.density, m.density, m.rotary_inertia};
  for (int f = 0; f < 3; ++f) {
    me(f, f) = epsilon * c0 * w[f];
    me(f + 3, f + 3) = epsilon * c0 * w[f];
    me(f, f + 3) = epsilon * c1 * w[f];
    me(f + 3, f) = epsilon * c1 * w[f];
  }
  return {ke, me};
}

// Local-to-global rotation for one node: local dofs are (tangential,
// normal, rotation), global dofs are (x, y, rotation).
inline Eigen::Matrix3d node_frame(const Vec2& tangent, const Vec2& normal) {
  Eigen::Matrix3d t;
  t << tangent.x(), tangent.y(), 0,
       normal.x(), normal.y(), 0,
       0, 0, 1;
  return t;
}

// 6x6 block-diagonal local-to-global map for a whole element.
inline Mat6 element_frame(const Beam& b) {
  Mat6 t = Mat6::Zero();
  t.block<3, 3>(0, 0) = node_frame(b.tangent, b.normal);
  t.block<3, 3>(3, 3) = node_frame(b.tangent, b.normal);
  return t;
}

}  // namespace beamgap
