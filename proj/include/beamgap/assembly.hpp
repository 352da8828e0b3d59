#pragma once

// Global assembly over a unit-cell graph.  One templated code path serves
// real (free, periodic, clamped) and complex (Bloch) problems, so the
// periodic operator is literally the Bloch operator evaluated at phase one.
//
// Dof layout: joint classes first (ordered by representative vertex id,
// three global dofs X, Y, Theta each), then beam interior nodes in beam
// order (three local dofs u, v, theta each).  Clamped classes and pinned
// components carry no dofs.
//
// A vertex flagged `clamped` is eliminated outright when it touches a stiff
// beam or when the constraint kind is Free or Clamped.  Under Periodic or
// Bloch constraints a flagged vertex touching only soft beams is instead
// slaved to the nearest stiff mesh node (over the 3x3 block of neighbor
// cells) through a rigid link, which is how soft beams hang off the stiff
// frame without sharing its joints.

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "beamgap/element.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/mesh.hpp"

namespace beamgap {

struct Constraints {
  enum class Kind { Free, Periodic, Clamped, Bloch };

  Kind kind = Kind::Free;
  // Bloch factor per lattice vector; ignored unless kind == Bloch.
  std::array<std::complex<double>, 2> phase = {{{1.0, 0.0}, {1.0, 0.0}}};
  // Extra single-dof eliminations (vertex id, component 0..2), applied to
  // the vertex's class.  Used to pin translations of floating problems.
  std::vector<std::pair<int, int>> pins;

  static Constraints free() { return {}; }
  static Constraints clamped() { return {Kind::Clamped, {}, {}}; }
  static Constraints periodic() { return {Kind::Periodic, {}, {}}; }
  static Constraints bloch(std::complex<double> p1, std::complex<double> p2) {
    return {Kind::Bloch, {{p1, p2}}, {}};
  }
};

// Identity of one scalar unknown.  Joints: beam == -1, node is the class
// representative vertex id, comp indexes (X, Y, Theta).  Interior nodes:
// comp indexes the beam-local (u, v, theta).
struct DofInfo {
  int beam;
  int node;
  int comp;
  bool joint;
};

namespace detail {

template <typename Scalar>
Scalar to_scalar(std::complex<double> z);

template <>
inline double to_scalar<double>(std::complex<double> z) {
  if (z.imag() != 0.0)
    throw numeric_error("complex Bloch phase in a real assembly");
  return z.real();
}

template <>
inline std::complex<double> to_scalar<std::complex<double>>(std::complex<double> z) {
  return z;
}

template <typename Scalar>
Scalar phase_power(Scalar p, int m) {
  Scalar r = Scalar(1);
  for (int i = 0; i < std::abs(m); ++i) r *= p;
  return m >= 0 ? r : Scalar(1) / r;
}

}  // namespace detail

// Map from stored unknowns to the three element-local dofs of one node.
// Column c multiplies stored dof `dof[c]`; dof -1 means that column is a
// hard zero (clamped or pinned).
template <typename Scalar>
struct NodeMap {
  std::array<int, 3> dof = {-1, -1, -1};
  Eigen::Matrix<Scalar, 3, 3> coeff = Eigen::Matrix<Scalar, 3, 3>::Zero();
};

template <typename Scalar>
class Assembly {
 public:
  using SparseMat = Eigen::SparseMatrix<Scalar>;
  using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SparseMat stiffness;
  SparseMat mass;
  int n_dofs = 0;
  std::vector<DofInfo> dof_info;
  UnitCellGraph graph;
  MeshSpec mesh;

  // node_maps[b][n] covers node n of beam b, n in 0..nel.
  std::vector<std::vector<NodeMap<Scalar>>> node_maps;

  double element_size(int beam) const {
    return graph.beams[beam].length / mesh.elements_per_beam[beam];
  }

  Vec2 node_position(int beam, int node) const {
    const Beam& b = graph.beams[beam];
    double t = static_cast<double>(node) / mesh.elements_per_beam[beam];
    return graph.vertex(b.start_vertex).pos + (t * b.length) * b.tangent;
  }

  // Element-local dof values (u0,v0,th0,u1,v1,th1) of element e of beam b
  // for a stored solution x.
  Eigen::Matrix<Scalar, 6, 1> gather(int beam, int elem, const DenseVec& x) const {
    Eigen::Matrix<Scalar, 6, 1> u = Eigen::Matrix<Scalar, 6, 1>::Zero();
    for (int side = 0; side < 2; ++side) {
      const NodeMap<Scalar>& nm = node_maps[beam][elem + side];
      for (int c = 0; c < 3; ++c) {
        if (nm.dof[c] < 0) continue;
        u.template segment<3>(3 * side) += nm.coeff.col(c) * x[nm.dof[c]];
      }
    }
    return u;
  }

  // Element-local values of the nodal field (u,v,theta) = lift(beam, node)
  // on the constrained nodes as well; used to build drive loads.
  template <typename Lift>
  DenseVec load_from_lift(const Lift& lift) const {
    DenseVec f = DenseVec::Zero(n_dofs);
    for (size_t b = 0; b < graph.beams.size(); ++b) {
      int nel = mesh.elements_per_beam[b];
      double he = graph.beams[b].length / nel;
      auto [ke, me] = element_matrices(graph.beams[b].material, he);
      (void)ke;
      for (int e = 0; e < nel; ++e) {
        Eigen::Matrix<double, 6, 1> d;
        d.segment<3>(0) = lift(static_cast<int>(b), e);
        d.segment<3>(3) = lift(static_cast<int>(b), e + 1);
        Eigen::Matrix<double, 6, 1> fe = me * d;
        for (int side = 0; side < 2; ++side) {
          const NodeMap<Scalar>& nm = node_maps[b][e + side];
          for (int c = 0; c < 3; ++c) {
            if (nm.dof[c] < 0) continue;
            f[nm.dof[c]] +=
                (nm.coeff.col(c).adjoint() * fe.segment<3>(3 * side).template cast<Scalar>())(0);
          }
        }
      }
    }
    return f;
  }
};

namespace detail {

enum class ClassStatus { Joint, Clamped, Attached };

struct ClassInfo {
  int rep;
  ClassStatus status = ClassStatus::Joint;
  std::array<int, 3> dof = {-1, -1, -1};
};

// Rigid-link extension: global motion of the point at offset r from a node
// moving as a rigid body.
inline Eigen::Matrix3d rigid_link(const Vec2& r) {
  Eigen::Matrix3d l = Eigen::Matrix3d::Identity();
  l(0, 2) = -r.y();
  l(1, 2) = r.x();
  return l;
}

}  // namespace detail

// Element matrices as a function of the beam, so scaled operators reuse the
// same assembly loop.
using ElementFactory = std::function<std::pair<Mat6, Mat6>(const Beam&, double)>;

inline std::pair<Mat6, Mat6> physical_elements(const Beam& b, double h) {
  return element_matrices(b.material, h);
}

template <typename Scalar>
Assembly<Scalar> assemble(const UnitCellGraph& g, const MeshSpec& mesh,
                          const Constraints& con,
                          const ElementFactory& factory = &physical_elements) {
  if (mesh.elements_per_beam.size() != g.beams.size())
    throw config_error("mesh does not match graph beam count");

  Assembly<Scalar> out;
  out.graph = g;
  out.mesh = mesh;

  // Free and Clamped problems treat identified vertices as distinct; only
  // periodic and Bloch assemblies glue them.
  const bool glue = con.kind == Constraints::Kind::Periodic ||
                    con.kind == Constraints::Kind::Bloch;
  UnitCellGraph g_cls = g;
  if (!glue) g_cls.identifications.clear();
  VertexClasses classes(g_cls);

  const Scalar p1 = con.kind == Constraints::Kind::Bloch
                        ? detail::to_scalar<Scalar>(con.phase[0])
                        : Scalar(1);
  const Scalar p2 = con.kind == Constraints::Kind::Bloch
                        ? detail::to_scalar<Scalar>(con.phase[1])
                        : Scalar(1);
  auto shift_phase = [&](std::array<int, 2> s) -> Scalar {
    return detail::phase_power(p1, s[0]) * detail::phase_power(p2, s[1]);
  };

  // Classify vertex classes.
  std::vector<detail::ClassInfo> cls;
  std::vector<int> class_of(g.vertices.size(), -1);
  {
    std::vector<int> reps;
    for (const Vertex& v : g.vertices) {
      auto [rep, s] = classes.resolve(v.id);
      (void)s;
      bool known = false;
      for (size_t i = 0; i < reps.size(); ++i)
        if (reps[i] == rep) {
          class_of[&v - g.vertices.data()] = static_cast<int>(i);
          known = true;
          break;
        }
      if (!known) {
        class_of[&v - g.vertices.data()] = static_cast<int>(reps.size());
        reps.push_back(rep);
      }
    }
    cls.resize(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) cls[i].rep = reps[i];
  }
  auto class_index = [&](int vertex_id) {
    for (size_t i = 0; i < g.vertices.size(); ++i)
      if (g.vertices[i].id == vertex_id) return class_of[i];
    throw config_error("unknown vertex id " + std::to_string(vertex_id));
  };

  // Stiff incidence and clamp flags per class.
  std::vector<bool> touches_stiff(cls.size(), false);
  std::vector<bool> flagged(cls.size(), false);
  std::vector<int> members(cls.size(), 0);
  for (const Beam& b : g.beams) {
    if (b.component != Component::Stiff) continue;
    touches_stiff[class_index(b.start_vertex)] = true;
    touches_stiff[class_index(b.end_vertex)] = true;
  }
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    if (g.vertices[i].clamped) flagged[class_of[i]] = true;
    members[class_of[i]] += 1;
  }

  const bool clamp_all_flagged = con.kind == Constraints::Kind::Clamped ||
                                 con.kind == Constraints::Kind::Free;
  for (size_t i = 0; i < cls.size(); ++i) {
    if (!flagged[i]) continue;
    if (clamp_all_flagged || touches_stiff[i])
      cls[i].status = detail::ClassStatus::Clamped;
    else
      cls[i].status = detail::ClassStatus::Attached;
  }

  // Joint dofs.
  for (auto& ci : cls) {
    if (ci.status != detail::ClassStatus::Joint) continue;
    for (int c = 0; c < 3; ++c) {
      bool pinned = false;
      for (auto [pv, pc] : con.pins) {
        auto [prep, ps] = classes.resolve(pv);
        (void)ps;
        if (prep == ci.rep && pc == c) pinned = true;
      }
      if (pinned) continue;
      ci.dof[c] = out.n_dofs++;
      out.dof_info.push_back({-1, ci.rep, c, true});
    }
  }

  // Interior node dofs.
  std::vector<int> interior_base(g.beams.size(), -1);
  for (size_t b = 0; b < g.beams.size(); ++b) {
    interior_base[b] = out.n_dofs;
    int nel = mesh.elements_per_beam[b];
    for (int n = 1; n < nel; ++n)
      for (int c = 0; c < 3; ++c) {
        out.dof_info.push_back({static_cast<int>(b), n, c, false});
        out.n_dofs++;
      }
  }

  // Attachment maps: slave each attached class to the nearest stiff mesh
  // node over neighbor-cell images.  Ties resolve by (distance, image,
  // beam, node) so the choice is reproducible.
  struct AttachTarget {
    std::array<int, 3> dof;
    Eigen::Matrix<Scalar, 3, 3> global_map;  // global dofs at the soft endpoint
  };
  std::vector<AttachTarget> attach(cls.size());
  for (size_t ci = 0; ci < cls.size(); ++ci) {
    if (cls[ci].status != detail::ClassStatus::Attached) continue;
    if (members[ci] > 1)
      throw structure_error("attachment vertex must not be identified with others");
    const Vertex& sv = g.vertex(cls[ci].rep);

    double best = std::numeric_limits<double>::infinity();
    std::tuple<int, int, int, int> best_key{0, 0, 0, 0};
    bool found = false;
    Vec2 best_r = Vec2::Zero();
    for (size_t b = 0; b < g.beams.size(); ++b) {
      if (g.beams[b].component != Component::Stiff) continue;
      int nel = mesh.elements_per_beam[b];
      for (int n = 0; n <= nel; ++n) {
        // Endpoint nodes route to their class; skip eliminated ones.
        if (n == 0 || n == nel) {
          int vid = n == 0 ? g.beams[b].start_vertex : g.beams[b].end_vertex;
          if (cls[class_index(vid)].status == detail::ClassStatus::Clamped) continue;
        }
        Vec2 pos = g.vertex(g.beams[b].start_vertex).pos +
                   (static_cast<double>(n) / nel * g.beams[b].length) *
                       g.beams[b].tangent;
        for (int m1 = -1; m1 <= 1; ++m1)
          for (int m2 = -1; m2 <= 1; ++m2) {
            Vec2 image = pos + m1 * g.lattice_vectors[0] + m2 * g.lattice_vectors[1];
            double d2 = (sv.pos - image).squaredNorm();
            std::tuple<int, int, int, int> key{m1, m2, static_cast<int>(b), n};
            if (!found || d2 < best || (d2 == best && key < best_key)) {
              found = true;
              best = d2;
              best_key = key;
              best_r = sv.pos - image;
            }
          }
      }
    }
    if (!found)
      throw structure_error("no stiff mesh node available to attach vertex " +
                            std::to_string(sv.id));

    auto [m1, m2, tb, tn] = best_key;
    const Beam& target_beam = g.beams[tb];
    Eigen::Matrix3d c_target;
    std::array<int, 3> tdof;
    Scalar ph;
    if (tn == 0 || tn == mesh.elements_per_beam[tb]) {
      int vid = tn == 0 ? target_beam.start_vertex : target_beam.end_vertex;
      auto [rep, s] = classes.resolve(vid);
      (void)rep;
      tdof = cls[class_index(vid)].dof;
      c_target = Eigen::Matrix3d::Identity();
      ph = shift_phase({s[0] + m1, s[1] + m2});
    } else {
      int base = interior_base[tb] + 3 * (tn - 1);
      tdof = {base, base + 1, base + 2};
      // Interior dofs are stored beam-local; bring them to the global frame.
      c_target = node_frame(target_beam.tangent, target_beam.normal).transpose();
      ph = shift_phase({m1, m2});
    }
    attach[ci].dof = tdof;
    attach[ci].global_map =
        ph * (detail::rigid_link(best_r) * c_target).template cast<Scalar>();
  }

  // Node maps.
  out.node_maps.resize(g.beams.size());
  for (size_t b = 0; b < g.beams.size(); ++b) {
    const Beam& beam = g.beams[b];
    int nel = mesh.elements_per_beam[b];
    out.node_maps[b].resize(nel + 1);
    const Eigen::Matrix3d tb = node_frame(beam.tangent, beam.normal);
    for (int n = 0; n <= nel; ++n) {
      NodeMap<Scalar>& nm = out.node_maps[b][n];
      if (n > 0 && n < nel) {
        int base = interior_base[b] + 3 * (n - 1);
        nm.dof = {base, base + 1, base + 2};
        nm.coeff = Eigen::Matrix<Scalar, 3, 3>::Identity();
        continue;
      }
      int vid = n == 0 ? beam.start_vertex : beam.end_vertex;
      auto [rep, s] = classes.resolve(vid);
      (void)rep;
      const detail::ClassInfo& ci = cls[class_index(vid)];
      switch (ci.status) {
        case detail::ClassStatus::Clamped:
          break;  // all-zero map
        case detail::ClassStatus::Attached:
          nm.dof = attach[class_index(vid)].dof;
          nm.coeff = tb.template cast<Scalar>() * attach[class_index(vid)].global_map;
          break;
        case detail::ClassStatus::Joint:
          nm.dof = ci.dof;
          nm.coeff = shift_phase(s) * tb.template cast<Scalar>();
          break;
      }
    }
  }

  // Element loop.
  std::vector<Eigen::Triplet<Scalar>> tk, tm;
  tk.reserve(36 * mesh.total_elements());
  tm.reserve(36 * mesh.total_elements());
  for (size_t b = 0; b < g.beams.size(); ++b) {
    int nel = mesh.elements_per_beam[b];
    double he = g.beams[b].length / nel;
    auto [ke, me] = factory(g.beams[b], he);
    const Eigen::Matrix<Scalar, 6, 6> kec = ke.template cast<Scalar>();
    const Eigen::Matrix<Scalar, 6, 6> mec = me.template cast<Scalar>();
    for (int e = 0; e < nel; ++e) {
      const NodeMap<Scalar>* maps[2] = {&out.node_maps[b][e], &out.node_maps[b][e + 1]};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Eigen::Matrix<Scalar, 3, 3> bk = maps[i]->coeff.adjoint() *
                                           kec.template block<3, 3>(3 * i, 3 * j) *
                                           maps[j]->coeff;
          Eigen::Matrix<Scalar, 3, 3> bm = maps[i]->coeff.adjoint() *
                                           mec.template block<3, 3>(3 * i, 3 * j) *
                                           maps[j]->coeff;
          for (int r = 0; r < 3; ++r) {
            if (maps[i]->dof[r] < 0) continue;
            for (int c = 0; c < 3; ++c) {
              if (maps[j]->dof[c] < 0) continue;
              tk.emplace_back(maps[i]->dof[r], maps[j]->dof[c], bk(r, c));
              tm.emplace_back(maps[i]->dof[r], maps[j]->dof[c], bm(r, c));
            }
          }
        }
    }
  }
  out.stiffness.resize(out.n_dofs, out.n_dofs);
  out.mass.resize(out.n_dofs, out.n_dofs);
  out.stiffness.setFromTriplets(tk.begin(), tk.end());
  out.mass.setFromTriplets(tm.begin(), tm.end());
  return out;
}

}  // namespace beamgap
