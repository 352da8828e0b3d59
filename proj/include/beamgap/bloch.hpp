#pragma once

// Floquet-Bloch dispersion of the periodic cell: quasi-periodic assembly at
// a wavevector, band sampling along a Brillouin-zone path, and the
// contrast-scaled operator for cells of size epsilon.
//
// Eigenvalues are frequency-squared; any value at -1e-10 or above is
// numerical zero of a rigid branch, genuinely negative values mean the
// assembly is broken.

#include <cmath>
#include <complex>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "beamgap/assembly.hpp"
#include "beamgap/element.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/mesh.hpp"
#include "beamgap/parallel.hpp"

namespace beamgap {

// Geometry scaled by a common factor; frames and topology unchanged.
inline UnitCellGraph scale_graph(const UnitCellGraph& g, double factor) {
  if (!(factor > 0)) throw config_error("scale factor must be positive");
  UnitCellGraph out = g;
  for (auto& v : out.vertices) v.pos *= factor;
  for (auto& b : out.beams) b.length *= factor;
  out.lattice_vectors[0] *= factor;
  out.lattice_vectors[1] *= factor;
  return out;
}

// Quasi-periodic operator of the physical (unscaled) cell at wavevector k.
inline Assembly<std::complex<double>> assemble_bloch(const UnitCellGraph& g,
                                                     const Vec2& k,
                                                     const MeshSpec& mesh) {
  std::complex<double> i1(0.0, 1.0);
  Constraints con = Constraints::bloch(
      std::exp(i1 * k.dot(g.lattice_vectors[0])),
      std::exp(i1 * k.dot(g.lattice_vectors[1])));
  return assemble<std::complex<double>>(g, mesh, con);
}

// Contrast-scaled operator: the cell shrunk to size epsilon, soft stiffness
// damped by the contrast, rotations entering the shear strain at 1/epsilon.
// Element counts come from the unscaled geometry so refinement studies hold
// the mesh topology fixed across epsilon.
inline Assembly<std::complex<double>> assemble_scaled(const UnitCellGraph& g,
                                                      const ScalingParams& s,
                                                      const Vec2& k,
                                                      const MeshSpec& mesh) {
  s.validate();
  UnitCellGraph gm = scale_graph(g, s.epsilon);
  std::complex<double> i1(0.0, 1.0);
  Constraints con = Constraints::bloch(
      std::exp(i1 * k.dot(gm.lattice_vectors[0])),
      std::exp(i1 * k.dot(gm.lattice_vectors[1])));
  double eps = s.epsilon, delta = s.contrast;
  ElementFactory factory = [eps, delta](const Beam& b, double he) {
    double sf = b.component == Component::Soft ? delta : 1.0;
    return element_matrices_scaled(b.material, he, eps, sf);
  };
  return assemble<std::complex<double>>(gm, mesh, con, factory);
}

inline Assembly<std::complex<double>> assemble_scaled(const UnitCellGraph& g,
                                                      const ScalingParams& s,
                                                      const Vec2& k, double h) {
  return assemble_scaled(g, s, k, make_mesh(g, h));
}

namespace detail {

inline Eigen::VectorXd pencil_eigenvalues(const Assembly<std::complex<double>>& asmb) {
  Eigen::MatrixXcd kd(asmb.stiffness), md(asmb.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges;
  ges.compute(kd, md, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success)
    throw numeric_error("generalized eigensolve failed");
  return ges.eigenvalues();
}

inline int clamp_band_count(int n_bands, int n_dofs) {
  if (n_bands < 1) throw config_error("band count must be at least 1");
  if (n_bands > n_dofs / 6)
    std::cerr << "warning: " << n_bands << " bands requested from a " << n_dofs
              << "-dof cell; upper bands carry discretization error\n";
  return std::min(n_bands, n_dofs);
}

}  // namespace detail

// Lowest n_bands frequency-squared values at wavevector k.  The Bloch
// factors are periodic in k over the reciprocal lattice, so any k
// representative of the same Brillouin-zone point gives the same spectrum.
inline Eigen::VectorXd dispersion_at(const UnitCellGraph& g, const Vec2& k,
                                     int n_bands, double h) {
  Assembly<std::complex<double>> asmb = assemble_bloch(g, k, make_mesh(g, h));
  int n = detail::clamp_band_count(n_bands, asmb.n_dofs);
  return detail::pencil_eigenvalues(asmb).head(n);
}

/// Reciprocal basis: b_i . a_j = 2 pi delta_ij.
inline std::array<Vec2, 2> reciprocal_vectors(const UnitCellGraph& g) {
  const Vec2& a1 = g.lattice_vectors[0];
  const Vec2& a2 = g.lattice_vectors[1];
  double det = a1.x() * a2.y() - a1.y() * a2.x();
  if (std::abs(det) < 1e-14)
    throw config_error("lattice vectors must be linearly independent");
  double f = 2.0 * M_PI / det;
  return {Vec2{f * a2.y(), -f * a2.x()}, Vec2{-f * a1.y(), f * a1.x()}};
}

/// Corner letters: G = zone center, X = half of b1, M = half of b1 + b2.
inline Vec2 zone_corner(const UnitCellGraph& g, char letter) {
  auto [b1, b2] = reciprocal_vectors(g);
  switch (letter) {
    case 'G': return Vec2::Zero();
    case 'X': return 0.5 * b1;
    case 'M': return 0.5 * (b1 + b2);
  }
  throw config_error(std::string("unknown zone-path letter '") + letter + "'");
}

struct PathPoint {
  double coord = 0.0;  // cumulative arclength in k space
  Vec2 k = Vec2::Zero();
};

// Sampled path through the zone: points_per_leg samples per leg counted
// from the leg's start, plus the final corner.
inline std::vector<PathPoint> zone_path(const UnitCellGraph& g,
                                        const std::string& spec,
                                        int points_per_leg) {
  if (spec.size() < 2) throw config_error("zone path needs at least two corners");
  if (points_per_leg < 1) throw config_error("points per leg must be at least 1");
  std::vector<Vec2> corners;
  for (char c : spec) corners.push_back(zone_corner(g, c));

  std::vector<PathPoint> path;
  double coord = 0.0;
  for (size_t leg = 0; leg + 1 < corners.size(); ++leg) {
    Vec2 d = corners[leg + 1] - corners[leg];
    for (int j = 0; j < points_per_leg; ++j) {
      double t = static_cast<double>(j) / points_per_leg;
      path.push_back({coord + t * d.norm(), corners[leg] + t * d});
    }
    coord += d.norm();
  }
  path.push_back({coord, corners.back()});
  return path;
}

struct BandStructure {
  std::vector<PathPoint> path;
  Eigen::MatrixXd bands;  // one row per path point, one column per band

  // Intervals above band j and below band j+1 over the sampled points
  // only; a finer path sampling can close them.
  struct Gap {
    double lo = 0, hi = 0;
    int below_band = 0;  // gap sits above this (0-based) band
  };
  std::vector<Gap> gaps;
};

namespace detail {

template <typename AssembleAt>
BandStructure band_structure_impl(const std::string& path_spec, int points_per_leg,
                                  int n_bands, const UnitCellGraph& g,
                                  AssembleAt&& assemble_at) {
  BandStructure bs;
  bs.path = zone_path(g, path_spec, points_per_leg);
  const int np = static_cast<int>(bs.path.size());

  int n_cols = 0;
  {
    // Probe once for the dof count so the clamp and warning happen before
    // the sweep.
    Assembly<std::complex<double>> probe = assemble_at(bs.path[0].k);
    n_cols = clamp_band_count(n_bands, probe.n_dofs);
  }
  bs.bands.resize(np, n_cols);
  parallel_for(np, [&](int i) {
    Assembly<std::complex<double>> asmb = assemble_at(bs.path[i].k);
    bs.bands.row(i) = pencil_eigenvalues(asmb).head(n_cols).transpose();
  });

  for (int j = 0; j + 1 < n_cols; ++j) {
    double lo = bs.bands.col(j).maxCoeff();
    double hi = bs.bands.col(j + 1).minCoeff();
    if (hi > lo + 1e-12 * std::max(1.0, std::abs(lo)))
      bs.gaps.push_back({lo, hi, j});
  }
  return bs;
}

}  // namespace detail

inline BandStructure band_structure(const UnitCellGraph& g, const std::string& path_spec,
                                    int points_per_leg, int n_bands, double h) {
  MeshSpec mesh = make_mesh(g, h);
  return detail::band_structure_impl(path_spec, points_per_leg, n_bands, g,
                                     [&](const Vec2& k) {
                                       return assemble_bloch(g, k, mesh);
                                     });
}

inline BandStructure band_structure_scaled(const UnitCellGraph& g,
                                           const ScalingParams& s,
                                           const std::string& path_spec,
                                           int points_per_leg, int n_bands,
                                           const MeshSpec& mesh) {
  return detail::band_structure_impl(path_spec, points_per_leg, n_bands, g,
                                     [&](const Vec2& k) {
                                       return assemble_scaled(g, s, k, mesh);
                                     });
}

inline BandStructure band_structure_scaled(const UnitCellGraph& g,
                                           const ScalingParams& s,
                                           const std::string& path_spec,
                                           int points_per_leg, int n_bands,
                                           double h) {
  return band_structure_scaled(g, s, path_spec, points_per_leg, n_bands,
                               make_mesh(g, h));
}

}  // namespace beamgap
