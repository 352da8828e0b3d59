#pragma once

// Per-beam subdivision counts.  Every beam gets at least two elements so
// each beam owns at least one interior node; element size is then
// length / count, never larger than the requested h (up to the floor).

#include <cmath>
#include <vector>

#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"

namespace beamgap {

struct MeshSpec {
  std::vector<int> elements_per_beam;

  int total_elements() const {
    int n = 0;
    for (int e : elements_per_beam) n += e;
    return n;
  }
};

inline MeshSpec make_mesh(const UnitCellGraph& g, double h) {
  if (!(h > 0)) throw config_error("mesh size h must be positive");
  MeshSpec m;
  m.elements_per_beam.reserve(g.beams.size());
  for (const Beam& b : g.beams) {
    // The slack keeps lengths that are exact multiples of h from picking
    // up a spurious extra element through roundoff.
    int nel = static_cast<int>(std::ceil(b.length / h - 1e-9));
    if (nel < 2) nel = 2;
    m.elements_per_beam.push_back(nel);
  }
  return m;
}

// Separate resolutions per component; soft beams usually need the finer
// mesh because the resonance solves live there.
inline MeshSpec make_mesh_by_component(const UnitCellGraph& g, double h_stiff,
                                       double h_soft) {
  if (!(h_stiff > 0) || !(h_soft > 0))
    throw config_error("mesh size h must be positive");
  MeshSpec m;
  m.elements_per_beam.reserve(g.beams.size());
  for (const Beam& b : g.beams) {
    double h = b.component == Component::Stiff ? h_stiff : h_soft;
    int nel = static_cast<int>(std::ceil(b.length / h - 1e-9));
    if (nel < 2) nel = 2;
    m.elements_per_beam.push_back(nel);
  }
  return m;
}

// Default mesh rule: h is the given fraction of the shortest beam.
inline double default_mesh_size(const UnitCellGraph& g, double fraction = 1.0 / 64.0) {
  double shortest = std::numeric_limits<double>::infinity();
  for (const Beam& b : g.beams) shortest = std::min(shortest, b.length);
  if (!std::isfinite(shortest)) throw config_error("graph has no beams");
  return shortest * fraction;
}

}  // namespace beamgap
