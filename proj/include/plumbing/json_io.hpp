#pragma once

// JSON encodings of graphs and moves.
//
//   graph  {"nodes": [[e,g,r], ...], "edges": [[u,v,sign], ...]}
//   move   {"kind": "R3", "dir": "fwd"|"inv", "site": {...}, "params": {...}}
//
// Node indices are positions in ascending vertex-id order, so a graph whose
// ids are already 0..n-1 round-trips with identical ids.

#include <string>

#include <nlohmann/json.hpp>

#include "plumbing/graph.hpp"
#include "plumbing/moves.hpp"

namespace plumbing {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json graph_to_json(const PlumbingGraph& g) {
  json nodes = json::array();
  for (const Vertex& v : g.vertices()) nodes.push_back({v.label.euler, v.label.genus, v.label.boundary});
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({g.index_of(e.u), g.index_of(e.v), to_int(e.sign)});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

/// Parses the structural format. Label validity is not checked here; run
/// validate() on the result.
inline PlumbingGraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) throw FormatError("graph needs 'nodes' and 'edges'");
  const json& nodes = j.at("nodes");
  const json& edges = j.at("edges");
  if (!nodes.is_array() || !edges.is_array()) throw FormatError("'nodes' and 'edges' must be arrays");
  PlumbingGraph g;
  for (const json& n : nodes) {
    if (!n.is_array() || n.size() != 3 || !n[0].is_number_integer() || !n[1].is_number_integer() || !n[2].is_number_integer())
      throw FormatError("node must be [e,g,r] integers");
    g.add_vertex({n[0].get<int>(), n[1].get<int>(), n[2].get<int>()});
  }
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number_integer())
      throw FormatError("edge must be [u,v,sign] integers");
    const long long u = e[0].get<long long>(), v = e[1].get<long long>();
    if (u < 0 || v < 0 || u >= static_cast<long long>(nodes.size()) || v >= static_cast<long long>(nodes.size()))
      throw FormatError("edge endpoint out of range");
    try {
      g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), sign_from_int(e[2].get<long long>()));
    } catch (const GraphError& err) {
      throw FormatError(err.what());
    }
  }
  return g;
}

inline json move_to_json(const MoveApplication& app) {
  json site = json::object();
  if (!app.vertices.empty()) site["vertices"] = app.vertices;
  if (!app.edges.empty()) site["edges"] = app.edges;
  if (!app.split.empty()) site["split"] = app.split;
  json params = json::object();
  for (const auto& [k, v] : app.params) params[k] = v;
  return {{"kind", to_string(app.kind)},
          {"dir", app.dir == Direction::Forward ? "fwd" : "inv"},
          {"site", std::move(site)},
          {"params", std::move(params)}};
}

inline MoveApplication move_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("move must be an object");
  MoveApplication app;
  const auto kind = j.contains("kind") && j["kind"].is_string() ? parse_move_kind(j["kind"].get<std::string>()) : std::nullopt;
  if (!kind) throw FormatError("move needs a kind among R0,R1,R2,R3,R4,R5,R8");
  app.kind = *kind;
  const std::string dir = j.value("dir", std::string("fwd"));
  if (dir == "fwd")
    app.dir = Direction::Forward;
  else if (dir == "inv")
    app.dir = Direction::Inverse;
  else
    throw FormatError("move dir must be 'fwd' or 'inv'");
  try {
    if (j.contains("site")) {
      const json& site = j.at("site");
      if (!site.is_object()) throw FormatError("move site must be an object");
      if (site.contains("vertices")) app.vertices = site.at("vertices").get<std::vector<VertexId>>();
      if (site.contains("edges")) app.edges = site.at("edges").get<std::vector<EdgeId>>();
      if (site.contains("split")) app.split = site.at("split").get<std::vector<EdgeId>>();
    }
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) app.params[k] = v.get<int>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed move: ") + e.what());
  }
  return app;
}

inline json moves_to_json(const std::vector<MoveApplication>& moves) {
  json arr = json::array();
  for (const MoveApplication& m : moves) arr.push_back(move_to_json(m));
  return arr;
}

inline std::vector<MoveApplication> moves_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("moves must be an array");
  std::vector<MoveApplication> out;
  for (const json& m : j) out.push_back(move_from_json(m));
  return out;
}

}  // namespace plumbing
