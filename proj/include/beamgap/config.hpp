#pragma once

// Lattice configuration files. Schema:
// {
//   "lattice_vectors": [[a1x,a1y],[a2x,a2y]],
//   "vertices":        [{"id": int, "pos": [x,y], "clamped": bool?}],
//   "identifications": [{"a": int, "b": int, "shift": [m1,m2]}],
//   "beams":           [{"v0": int, "v1": int,
//                        "component": "stiff"|"soft",
//                        "material": {"gamma","eta","kappa","density","rotary_inertia"},
//                        "tangent": [tx,ty]?, "attachment": "direct"|"stub"?}]
// }
// Tangents and lengths are recomputed from vertex positions; a supplied
// tangent is renormalized (with a warning) and cross-checked.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamgap/lattice.hpp"

namespace beamgap {

namespace detail {

inline Vec2 read_vec2(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(what + " must be a 2-element number array");
  return Vec2{j[0].get<double>(), j[1].get<double>()};
}

inline double read_field(const nlohmann::json& j, const char* key,
                         const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error(ctx + ": missing or non-numeric field \"" + key + "\"");
  return j[key].get<double>();
}

}  // namespace detail

inline UnitCellGraph parse_config(const nlohmann::json& j,
                                  std::vector<std::string>* warnings = nullptr) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  UnitCellGraph g;
  if (!j.contains("lattice_vectors"))
    throw config_error("config: missing field \"lattice_vectors\"");
  const auto& lv = j["lattice_vectors"];
  if (!lv.is_array() || lv.size() != 2)
    throw config_error("config: \"lattice_vectors\" must hold two 2-vectors");
  g.lattice_vectors[0] = detail::read_vec2(lv[0], "lattice vector 1");
  g.lattice_vectors[1] = detail::read_vec2(lv[1], "lattice vector 2");

  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw config_error("config: missing field \"vertices\"");
  for (const auto& vj : j["vertices"]) {
    Vertex v;
    if (!vj.contains("id") || !vj["id"].is_number_integer())
      throw config_error("vertex: missing integer field \"id\"");
    v.id = vj["id"].get<int>();
    if (!vj.contains("pos"))
      throw config_error("vertex " + std::to_string(v.id) + ": missing field \"pos\"");
    v.pos = detail::read_vec2(vj["pos"], "vertex " + std::to_string(v.id) + " pos");
    if (vj.contains("clamped")) v.clamped = vj["clamped"].get<bool>();
    g.vertices.push_back(v);
  }

  if (j.contains("identifications")) {
    for (const auto& ij : j["identifications"]) {
      Identification idf;
      if (!ij.contains("a") || !ij.contains("b") || !ij.contains("shift"))
        throw config_error("identification: fields \"a\", \"b\", \"shift\" are required");
      idf.a = ij["a"].get<int>();
      idf.b = ij["b"].get<int>();
      const auto& s = ij["shift"];
      if (!s.is_array() || s.size() != 2)
        throw config_error("identification: \"shift\" must be a 2-element integer array");
      idf.shift = {s[0].get<int>(), s[1].get<int>()};
      g.identifications.push_back(idf);
    }
  }

  if (!j.contains("beams") || !j["beams"].is_array())
    throw config_error("config: missing field \"beams\"");
  int beam_no = 0;
  for (const auto& bj : j["beams"]) {
    std::string ctx = "beam " + std::to_string(beam_no++);
    Beam b;
    if (!bj.contains("v0") || !bj.contains("v1"))
      throw config_error(ctx + ": fields \"v0\", \"v1\" are required");
    b.start_vertex = bj["v0"].get<int>();
    b.end_vertex = bj["v1"].get<int>();
    if (!bj.contains("component"))
      throw config_error(ctx + ": missing field \"component\"");
    std::string comp = bj["component"].get<std::string>();
    if (comp == "stiff")
      b.component = Component::Stiff;
    else if (comp == "soft")
      b.component = Component::Soft;
    else
      throw config_error(ctx + ": component must be \"stiff\" or \"soft\"");
    if (bj.contains("material")) {
      const auto& mj = bj["material"];
      b.material.gamma = detail::read_field(mj, "gamma", ctx);
      b.material.eta = detail::read_field(mj, "eta", ctx);
      b.material.kappa = detail::read_field(mj, "kappa", ctx);
      b.material.density = detail::read_field(mj, "density", ctx);
      b.material.rotary_inertia = detail::read_field(mj, "rotary_inertia", ctx);
    }
    if (bj.contains("attachment")) {
      std::string att = bj["attachment"].get<std::string>();
      if (att == "direct")
        b.attachment = Attachment::Direct;
      else if (att == "stub")
        b.attachment = Attachment::Stub;
      else
        throw config_error(ctx + ": attachment must be \"direct\" or \"stub\"");
    }

    auto has_vertex = [&](int id) {
      for (const Vertex& v : g.vertices)
        if (v.id == id) return true;
      return false;
    };
    if (!has_vertex(b.start_vertex) || !has_vertex(b.end_vertex))
      throw config_error(ctx + ": references an unknown vertex");

    // Geometry: length and frame from the vertex positions.
    const Vertex& v0 = g.vertex(b.start_vertex);
    const Vertex& v1 = g.vertex(b.end_vertex);
    Vec2 d = v1.pos - v0.pos;
    b.length = d.norm();
    if (b.length <= 0) throw config_error(ctx + ": coincident endpoints");
    b.tangent = d / b.length;
    if (bj.contains("tangent")) {
      Vec2 t = detail::read_vec2(bj["tangent"], ctx + " tangent");
      double n = t.norm();
      if (n <= 0) throw config_error(ctx + ": zero tangent");
      if (std::abs(n - 1.0) > kFrameTol) {
        warn(ctx + ": tangent renormalized (|t| = " + std::to_string(n) + ")");
        t /= n;
      }
      if ((t - b.tangent).norm() > 1e-9)
        throw config_error(ctx + ": tangent disagrees with the vertex positions");
      b.tangent = t;
    }
    b.normal = rotate90(b.tangent);
    g.beams.push_back(b);
  }

  validate_graph(g);
  return g;
}

inline UnitCellGraph load_config(const std::string& path,
                                 std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("parse error in " + path + ": " + e.what());
  }
  return parse_config(j, warnings);
}

// Canonical byte content used for the provenance hash of a config.
inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace beamgap
