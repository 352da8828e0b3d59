#pragma once

// Periodic beam-network geometry: materials, beams, the unit-cell graph,
// the built-in square example, and component subgraph extraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamgap/errors.hpp"

namespace beamgap {

using Vec2 = Eigen::Vector2d;

inline constexpr double kFrameTol = 1e-12;

struct MaterialParams {
  double gamma = 1.0;           // extensional stiffness
  double eta = 1.0;             // bending stiffness
  double kappa = 1.0;           // shear stiffness
  double density = 1.0;         // mass per unit length
  double rotary_inertia = 1.0;  // rotational inertia per unit length

  void validate() const {
    if (!(gamma > 0 && eta > 0 && kappa > 0 && density > 0 && rotary_inertia > 0))
      throw config_error("material parameters must all be strictly positive");
  }
};

enum class Component { Stiff, Soft };

// How a free-standing soft endpoint couples to the stiff frame in the
// full-cell model. The clamped limit model ignores this.
enum class Attachment { Direct, Stub };

struct Beam {
  int start_vertex = -1;
  int end_vertex = -1;
  double length = 0.0;
  Vec2 tangent{1.0, 0.0};
  Vec2 normal{0.0, 1.0};  // tangent rotated +90 degrees
  MaterialParams material;
  Component component = Component::Stiff;
  Attachment attachment = Attachment::Direct;
};

struct Vertex {
  int id = -1;
  Vec2 pos{0.0, 0.0};
  // Clamp target: hard clamp if any incident beam is stiff, otherwise an
  // attachment point that is clamped to zero only in the limit model.
  bool clamped = false;
};

// Declares vertex b = vertex a + shift[0]*A1 + shift[1]*A2.
struct Identification {
  int a = -1;
  int b = -1;
  std::array<int, 2> shift{0, 0};
};

struct UnitCellGraph {
  std::vector<Vertex> vertices;
  std::vector<Beam> beams;
  std::array<Vec2, 2> lattice_vectors{Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  std::vector<Identification> identifications;

  const Vertex& vertex(int id) const {
    for (const auto& v : vertices)
      if (v.id == id) return v;
    throw structure_error("unknown vertex id " + std::to_string(id));
  }

  double total_length() const {
    double s = 0.0;
    for (const auto& b : beams) s += b.length;
    return s;
  }
};

inline Vec2 rotate90(const Vec2& t) { return Vec2{-t.y(), t.x()}; }

// ----------------------------------------------------------------------
// Vertex-class resolution (union-find over identifications, carrying the
// accumulated lattice shift from representative to member).
// ----------------------------------------------------------------------

class VertexClasses {
public:
  explicit VertexClasses(const UnitCellGraph& g) {
    int max_id = -1;
    for (const auto& v : g.vertices) max_id = std::max(max_id, v.id);
    parent_.resize(max_id + 1);
    shift_.assign(max_id + 1, {0, 0});
    present_.assign(max_id + 1, false);
    for (const auto& v : g.vertices) {
      if (v.id < 0) throw config_error("vertex ids must be non-negative");
      if (present_[v.id]) throw config_error("duplicate vertex id " + std::to_string(v.id));
      parent_[v.id] = v.id;
      present_[v.id] = true;
    }
    for (const auto& idf : g.identifications) {
      check(idf.a);
      check(idf.b);
      unite(idf.a, idf.b, idf.shift);
    }
  }

  // Representative vertex and the shift m with v = rep + m.A.
  std::pair<int, std::array<int, 2>> resolve(int v) const {
    check(v);
    std::array<int, 2> m{0, 0};
    int r = v;
    while (parent_[r] != r) {
      m[0] += shift_[r][0];
      m[1] += shift_[r][1];
      r = parent_[r];
    }
    return {r, m};
  }

  bool same_class(int a, int b) const { return resolve(a).first == resolve(b).first; }

private:
  void check(int v) const {
    if (v < 0 || v >= static_cast<int>(present_.size()) || !present_[v])
      throw structure_error("identification references unknown vertex " + std::to_string(v));
  }

  void unite(int a, int b, std::array<int, 2> m_ab) {
    // b = a + m_ab.A
    auto [ra, ma] = resolve(a);
    auto [rb, mb] = resolve(b);
    if (ra == rb) {
      // consistency: b = ra + mb and b = a + m_ab = ra + ma + m_ab
      if (mb[0] != ma[0] + m_ab[0] || mb[1] != ma[1] + m_ab[1])
        throw structure_error("vertex " + std::to_string(b) +
                              " identified with two different lattice shifts");
      return;
    }
    // attach rb under ra: rb = b - mb.A = a + m_ab.A - mb.A = ra + (ma + m_ab - mb).A
    parent_[rb] = ra;
    shift_[rb] = {ma[0] + m_ab[0] - mb[0], ma[1] + m_ab[1] - mb[1]};
  }

  mutable std::vector<int> parent_;
  mutable std::vector<std::array<int, 2>> shift_;
  std::vector<bool> present_;
};

// ----------------------------------------------------------------------
// Validation
// ----------------------------------------------------------------------

namespace detail {

// Periodic connectivity of the stiff subgraph, tested on an n x n tiling.
inline bool stiff_connected_on_tiling(const UnitCellGraph& g, int n) {
  VertexClasses cls(g);
  // Collect stiff vertex classes.
  std::set<int> stiff_reps;
  for (const auto& b : g.beams) {
    if (b.component != Component::Stiff) continue;
    stiff_reps.insert(cls.resolve(b.start_vertex).first);
    stiff_reps.insert(cls.resolve(b.end_vertex).first);
  }
  if (stiff_reps.empty()) return false;

  // Nodes of the tiled graph: (rep, cell index) with cells on [0,n)^2.
  auto node = [&](int rep, int cx, int cy) {
    int ri = static_cast<int>(std::distance(stiff_reps.begin(), stiff_reps.find(rep)));
    return (ri * n + cx) * n + cy;
  };
  int total = static_cast<int>(stiff_reps.size()) * n * n;
  std::vector<int> uf(total);
  for (int i = 0; i < total; ++i) uf[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  auto join = [&](int x, int y) { uf[find(x)] = find(y); };

  for (const auto& b : g.beams) {
    if (b.component != Component::Stiff) continue;
    auto [r0, m0] = cls.resolve(b.start_vertex);
    auto [r1, m1] = cls.resolve(b.end_vertex);
    // The beam joins class r0 in cell c to class r1 in cell c + (m1 - m0),
    // for every cell c of the tiling (open boundary: skip out-of-range).
    int dx = m1[0] - m0[0], dy = m1[1] - m0[1];
    for (int cx = 0; cx < n; ++cx)
      for (int cy = 0; cy < n; ++cy) {
        int ex = cx + dx, ey = cy + dy;
        if (ex < 0 || ex >= n || ey < 0 || ey >= n) continue;
        join(node(r0, cx, cy), node(r1, ex, ey));
      }
  }
  int root = -1;
  for (int ri = 0; ri < static_cast<int>(stiff_reps.size()); ++ri)
    for (int cx = 0; cx < n; ++cx)
      for (int cy = 0; cy < n; ++cy) {
        int r = find((ri * n + cx) * n + cy);
        if (root < 0) root = r;
        if (r != root) return false;
      }
  return true;
}

}  // namespace detail

// Checks every structural invariant of a graph; throws config_error or
// structure_error naming the violated condition.
inline void validate_graph(const UnitCellGraph& g) {
  const Vec2& a1 = g.lattice_vectors[0];
  const Vec2& a2 = g.lattice_vectors[1];
  double det = a1.x() * a2.y() - a1.y() * a2.x();
  if (std::abs(det) < 1e-14)
    throw config_error("lattice vectors must be linearly independent");

  VertexClasses cls(g);  // throws on inconsistent identifications

  for (const auto& b : g.beams) {
    b.material.validate();
    const Vertex& v0 = g.vertex(b.start_vertex);
    const Vertex& v1 = g.vertex(b.end_vertex);
    if (std::abs(b.tangent.norm() - 1.0) > kFrameTol)
      throw config_error("beam tangent must be a unit vector");
    if ((b.normal - rotate90(b.tangent)).norm() > kFrameTol)
      throw config_error("beam normal must equal the tangent rotated +90 degrees");
    Vec2 d = v1.pos - v0.pos;
    if (std::abs(d.norm() - b.length) > kFrameTol)
      throw config_error("beam length must equal the distance between its endpoints");
    if (b.length <= 0) throw config_error("beam length must be positive");
    if ((d - b.length * b.tangent).norm() > 1e-9 * std::max(1.0, b.length))
      throw config_error("beam tangent must point from start vertex to end vertex");
  }

  bool has_stiff = false;
  for (const auto& b : g.beams) has_stiff |= (b.component == Component::Stiff);
  if (has_stiff && !detail::stiff_connected_on_tiling(g, 3))
    throw structure_error("stiff component not periodically connected");

  // Soft endpoints must touch the stiff graph, another soft beam, or be
  // flagged as clamp targets; otherwise the resonance problem is ill-posed.
  std::set<int> stiff_classes, soft_shared;
  std::vector<int> soft_end_count;
  for (const auto& b : g.beams) {
    auto r0 = cls.resolve(b.start_vertex).first;
    auto r1 = cls.resolve(b.end_vertex).first;
    if (b.component == Component::Stiff) {
      stiff_classes.insert(r0);
      stiff_classes.insert(r1);
    }
  }
  std::vector<std::pair<int, int>> soft_class_count;  // (class, count)
  for (const auto& b : g.beams) {
    if (b.component != Component::Soft) continue;
    for (int v : {b.start_vertex, b.end_vertex}) {
      int r = cls.resolve(v).first;
      bool found = false;
      for (auto& [c, n] : soft_class_count)
        if (c == r) {
          ++n;
          found = true;
        }
      if (!found) soft_class_count.push_back({r, 1});
    }
  }
  for (const auto& b : g.beams) {
    if (b.component != Component::Soft) continue;
    for (int v : {b.start_vertex, b.end_vertex}) {
      int r = cls.resolve(v).first;
      if (stiff_classes.count(r)) continue;
      int incid = 0;
      for (auto& [c, n] : soft_class_count)
        if (c == r) incid = n;
      if (incid >= 2) continue;  // shared with another soft beam
      bool flagged = false;
      for (const auto& vv : g.vertices)
        if (cls.resolve(vv.id).first == r && vv.clamped) flagged = true;
      if (!flagged)
        throw config_error("soft beam endpoint at vertex " + std::to_string(v) +
                           " is dangling: not on the stiff graph, not shared, not flagged");
    }
  }
}

// ----------------------------------------------------------------------
// Built-in square example: a stiff cross of period 1 through the cell
// center plus an isolated soft segment of length 2a at angle alpha,
// centered in the lower-left cell quadrant.
// ----------------------------------------------------------------------

inline UnitCellGraph build_square_example(double alpha_deg, double half_length,
                                          const MaterialParams& stiff = {},
                                          const MaterialParams& soft = {}) {
  if (!(alpha_deg > 0.0 && alpha_deg < 90.0))
    throw geometry_error("inclination angle must lie strictly between 0 and 90 degrees");
  if (!(half_length > 0.0))
    throw geometry_error("soft segment half-length must be positive");
  stiff.validate();
  soft.validate();

  double alpha = alpha_deg * M_PI / 180.0;
  Vec2 tau{std::cos(alpha), std::sin(alpha)};
  const double a = half_length;

  // The segment is centered at (1/4, 1/4); it must stay strictly inside its
  // quadrant, i.e. clear of the cell walls and of the cross arms at
  // x = 1/2 and y = 1/2.
  if (a * std::max(std::abs(tau.x()), std::abs(tau.y())) >= 0.25)
    throw geometry_error("soft segment of half-length " + std::to_string(a) +
                         " at angle " + std::to_string(alpha_deg) +
                         " deg does not fit inside the cell quadrant");

  UnitCellGraph g;
  g.lattice_vectors = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

  Vec2 c{0.5, 0.5};
  Vec2 seg_c{0.25, 0.25};
  g.vertices = {
      {0, c, false},               // cross junction
      {1, c + Vec2{1.0, 0.0}, false},  // junction image, one cell to the right
      {2, c + Vec2{0.0, 1.0}, false},  // junction image, one cell up
      {3, seg_c - a * tau, true},  // soft endpoints: clamp targets
      {4, seg_c + a * tau, true},
  };
  g.identifications = {
      {0, 1, {1, 0}},
      {0, 2, {0, 1}},
  };

  auto make_beam = [](int v0, int v1, double len, Vec2 t, const MaterialParams& m,
                      Component comp) {
    Beam b;
    b.start_vertex = v0;
    b.end_vertex = v1;
    b.length = len;
    b.tangent = t;
    b.normal = rotate90(t);
    b.material = m;
    b.component = comp;
    return b;
  };
  // Two stiff loop beams (each closes onto the junction through an
  // identified image) and one soft segment.
  g.beams = {
      make_beam(0, 1, 1.0, Vec2{1.0, 0.0}, stiff, Component::Stiff),
      make_beam(0, 2, 1.0, Vec2{0.0, 1.0}, stiff, Component::Stiff),
      make_beam(3, 4, 2.0 * a, tau, soft, Component::Soft),
  };

  validate_graph(g);
  return g;
}

// Free-standing soft segment of half-length a at inclination alpha,
// centered at the origin, endpoints flagged for clamping.  This is the
// soft problem of the square cell without the geometric embedding, so it
// accepts half-lengths the cell quadrant could not hold.
inline UnitCellGraph build_soft_segment(double alpha_deg, double half_length,
                                        const MaterialParams& soft = {}) {
  if (!(half_length > 0.0))
    throw geometry_error("soft segment half-length must be positive");
  soft.validate();
  double alpha = alpha_deg * M_PI / 180.0;
  Vec2 tau{std::cos(alpha), std::sin(alpha)};

  UnitCellGraph g;
  g.lattice_vectors = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  g.vertices = {
      {0, -half_length * tau, true},
      {1, half_length * tau, true},
  };
  Beam b;
  b.start_vertex = 0;
  b.end_vertex = 1;
  b.length = 2.0 * half_length;
  b.tangent = tau;
  b.normal = rotate90(tau);
  b.material = soft;
  b.component = Component::Soft;
  g.beams = {b};
  validate_graph(g);
  return g;
}

// ----------------------------------------------------------------------
// Component subgraphs
// ----------------------------------------------------------------------

// Restriction of g to one component. For the soft restriction, every
// boundary point (junction with the stiff graph, or flagged endpoint)
// keeps its clamped flag set; these are the clamped points of the
// resonance problem.
inline UnitCellGraph component_subgraph(const UnitCellGraph& g, Component which) {
  VertexClasses cls(g);
  std::set<int> stiff_classes;
  for (const auto& b : g.beams)
    if (b.component == Component::Stiff) {
      stiff_classes.insert(cls.resolve(b.start_vertex).first);
      stiff_classes.insert(cls.resolve(b.end_vertex).first);
    }

  UnitCellGraph out;
  out.lattice_vectors = g.lattice_vectors;
  std::set<int> used;
  for (const auto& b : g.beams)
    if (b.component == which) {
      out.beams.push_back(b);
      used.insert(b.start_vertex);
      used.insert(b.end_vertex);
    }
  for (const auto& v : g.vertices) {
    if (!used.count(v.id)) continue;
    Vertex vv = v;
    if (which == Component::Soft) {
      // A soft endpoint on the stiff graph is clamped in the soft problem.
      if (stiff_classes.count(cls.resolve(v.id).first)) vv.clamped = true;
    }
    out.vertices.push_back(vv);
  }
  for (const auto& idf : g.identifications)
    if (used.count(idf.a) && used.count(idf.b)) out.identifications.push_back(idf);
  return out;
}

inline UnitCellGraph stiff_subgraph(const UnitCellGraph& g) {
  return component_subgraph(g, Component::Stiff);
}

inline UnitCellGraph soft_subgraph(const UnitCellGraph& g) {
  return component_subgraph(g, Component::Soft);
}

// Cell size and soft/stiff contrast of the scaled high-contrast problem.
struct ScalingParams {
  double epsilon = 0.25;
  double contrast = 0.0625;  // defaults to epsilon^2

  static ScalingParams with_default_contrast(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
      throw config_error("epsilon must lie strictly between 0 and 1");
    return {eps, eps * eps};
  }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw config_error("epsilon must lie strictly between 0 and 1");
    if (!(contrast > 0.0)) throw config_error("contrast must be positive");
  }
};

}  // namespace beamgap
