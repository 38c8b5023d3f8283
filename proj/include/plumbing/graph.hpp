#pragma once

// Plumbing graphs: connected undirected multigraphs with loops whose vertices
// carry (euler, genus, boundary) triples and whose edges carry a sign.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumbing {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign operator-(Sign s) noexcept { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
constexpr Sign operator*(Sign a, Sign b) noexcept { return a == b ? Sign::Plus : Sign::Minus; }

inline Sign sign_from_int(long long v) {
  if (v == 1) return Sign::Plus;
  if (v == -1) return Sign::Minus;
  throw GraphError("edge sign must be +1 or -1, got " + std::to_string(v));
}

/// Vertex triple. A negative genus encodes a non-orientable surface with
/// |genus| cross-caps; `boundary` counts removed open disks.
struct VertexLabel {
  int euler = 0;
  int genus = 0;
  int boundary = 0;

  friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;

  /// The Euler number is meaningless on a vertex with boundary; rewrites that
  /// would leave one there reset it to zero.
  [[nodiscard]] constexpr VertexLabel normalized() const noexcept {
    return boundary > 0 ? VertexLabel{0, genus, boundary} : *this;
  }
};

/// Connected sum of the surfaces encoded by two genus codes.
constexpr int genus_add(int g1, int g2) noexcept {
  if (static_cast<long long>(g1) * g2 >= 0) return g1 + g2;
  if (g1 > 0) return -2 * g1 + g2;
  return g1 - 2 * g2;
}

struct Vertex {
  VertexId id;
  VertexLabel label;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  EdgeId id;
  VertexId u;  // u <= v
  VertexId v;
  Sign sign;

  [[nodiscard]] bool is_loop() const noexcept { return u == v; }
  [[nodiscard]] bool touches(VertexId w) const noexcept { return u == w || v == w; }
  [[nodiscard]] VertexId other(VertexId w) const noexcept { return u == w ? v : u; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Value type. Ids are never reused within a graph's lifetime; copies keep
/// the id counters so a move log recorded on one copy replays on another.
class PlumbingGraph {
 public:
  PlumbingGraph() = default;

  VertexId add_vertex(VertexLabel label) {
    const VertexId id = next_vertex_++;
    vertices_.push_back({id, label});
    return id;
  }

  EdgeId add_edge(VertexId a, VertexId b, Sign sign) {
    require_vertex(a);
    require_vertex(b);
    const EdgeId id = next_edge_++;
    edges_.push_back({id, std::min(a, b), std::max(a, b), sign});
    return id;
  }

  /// Removes the vertex together with every incident edge.
  void remove_vertex(VertexId id) {
    auto it = find_vertex(id);
    if (it == vertices_.end() || it->id != id) throw GraphError("unknown vertex " + std::to_string(id));
    vertices_.erase(it);
    std::erase_if(edges_, [id](const Edge& e) { return e.touches(id); });
  }

  void remove_edge(EdgeId id) {
    auto it = find_edge(id);
    if (it == edges_.end() || it->id != id) throw GraphError("unknown edge " + std::to_string(id));
    edges_.erase(it);
  }

  void set_edge(EdgeId id, VertexId a, VertexId b, Sign sign) {
    require_vertex(a);
    require_vertex(b);
    Edge& e = edge_mut(id);
    e.u = std::min(a, b);
    e.v = std::max(a, b);
    e.sign = sign;
  }

  void set_sign(EdgeId id, Sign sign) { edge_mut(id).sign = sign; }

  void set_label(VertexId id, VertexLabel label) { vertex_mut(id).label = label; }

  [[nodiscard]] bool has_vertex(VertexId id) const noexcept {
    auto it = find_vertex(id);
    return it != vertices_.end() && it->id == id;
  }
  [[nodiscard]] bool has_edge(EdgeId id) const noexcept {
    auto it = find_edge(id);
    return it != edges_.end() && it->id == id;
  }

  [[nodiscard]] const VertexLabel& label(VertexId id) const { return vertex(id).label; }

  [[nodiscard]] const Vertex& vertex(VertexId id) const {
    auto it = find_vertex(id);
    if (it == vertices_.end() || it->id != id) throw GraphError("unknown vertex " + std::to_string(id));
    return *it;
  }

  [[nodiscard]] const Edge& edge(EdgeId id) const {
    auto it = find_edge(id);
    if (it == edges_.end() || it->id != id) throw GraphError("unknown edge " + std::to_string(id));
    return *it;
  }

  [[nodiscard]] const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] VertexId next_vertex_id() const noexcept { return next_vertex_; }
  [[nodiscard]] EdgeId next_edge_id() const noexcept { return next_edge_; }

  /// Edge ids incident to `v`, ascending. A loop is listed once.
  [[nodiscard]] std::vector<EdgeId> incident_edges(VertexId v) const {
    std::vector<EdgeId> out;
    for (const Edge& e : edges_)
      if (e.touches(v)) out.push_back(e.id);
    return out;
  }

  /// Position of a vertex in `vertices()`.
  [[nodiscard]] std::size_t index_of(VertexId id) const {
    auto it = find_vertex(id);
    if (it == vertices_.end() || it->id != id) throw GraphError("unknown vertex " + std::to_string(id));
    return static_cast<std::size_t>(it - vertices_.begin());
  }

  /// Copy with vertex ids renumbered 0..n-1 and edge ids 0..m-1, both in
  /// ascending id order.
  [[nodiscard]] PlumbingGraph compacted() const {
    PlumbingGraph out;
    for (const Vertex& v : vertices_) out.add_vertex(v.label);
    for (const Edge& e : edges_)
      out.add_edge(static_cast<VertexId>(index_of(e.u)), static_cast<VertexId>(index_of(e.v)), e.sign);
    return out;
  }

 private:
  void require_vertex(VertexId id) const {
    if (!has_vertex(id)) throw GraphError("unknown vertex " + std::to_string(id));
  }

  std::vector<Vertex>::const_iterator find_vertex(VertexId id) const noexcept {
    return std::lower_bound(vertices_.begin(), vertices_.end(), id,
                            [](const Vertex& v, VertexId key) { return v.id < key; });
  }
  std::vector<Edge>::const_iterator find_edge(EdgeId id) const noexcept {
    return std::lower_bound(edges_.begin(), edges_.end(), id, [](const Edge& e, EdgeId key) { return e.id < key; });
  }
  Vertex& vertex_mut(VertexId id) {
    auto it = find_vertex(id);
    if (it == vertices_.end() || it->id != id) throw GraphError("unknown vertex " + std::to_string(id));
    return vertices_[static_cast<std::size_t>(it - vertices_.begin())];
  }
  Edge& edge_mut(EdgeId id) {
    auto it = find_edge(id);
    if (it == edges_.end() || it->id != id) throw GraphError("unknown edge " + std::to_string(id));
    return edges_[static_cast<std::size_t>(it - edges_.begin())];
  }

  std::vector<Vertex> vertices_;  // sorted by id
  std::vector<Edge> edges_;       // sorted by id
  VertexId next_vertex_ = 0;
  EdgeId next_edge_ = 0;
};

/// Number of incident edge-ends; a loop contributes two. Every other
/// loop-sensitive degree computation goes through here.
inline std::size_t degree(const PlumbingGraph& g, VertexId v) {
  if (!g.has_vertex(v)) throw GraphError("unknown vertex " + std::to_string(v));
  std::size_t d = 0;
  for (const Edge& e : g.edges()) {
    if (e.u == v) ++d;
    if (e.v == v) ++d;
  }
  return d;
}

struct GraphStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t loop_count = 0;
  std::vector<std::size_t> degrees;  // in vertex id order
};

inline GraphStats stats(const PlumbingGraph& g) {
  GraphStats s;
  s.vertex_count = g.vertex_count();
  s.edge_count = g.edge_count();
  s.degrees.assign(g.vertex_count(), 0);
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) ++s.loop_count;
    ++s.degrees[g.index_of(e.u)];
    ++s.degrees[g.index_of(e.v)];
  }
  return s;
}

inline std::size_t component_count(const PlumbingGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = n;
  for (const Edge& e : g.edges()) {
    const std::size_t a = find(g.index_of(e.u)), b = find(g.index_of(e.v));
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps;
}

enum class Rule { Empty, NegativeBoundary, EulerWithBoundary, Disconnected };

inline const char* rule_name(Rule r) noexcept {
  switch (r) {
    case Rule::Empty: return "graph is empty";
    case Rule::NegativeBoundary: return "r must be non-negative";
    case Rule::EulerWithBoundary: return "e must vanish when r>0";
    case Rule::Disconnected: return "disconnected";
  }
  return "?";
}

struct Violation {
  Rule rule;
  VertexId vertex = 0;  // meaningful for per-vertex rules only

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidityReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] bool has(Rule r) const noexcept {
    return std::any_of(violations.begin(), violations.end(), [r](const Violation& v) { return v.rule == r; });
  }
  [[nodiscard]] std::string describe() const {
    std::string s;
    for (const Violation& v : violations) {
      if (!s.empty()) s += "; ";
      s += rule_name(v.rule);
      if (v.rule == Rule::NegativeBoundary || v.rule == Rule::EulerWithBoundary) s += " (vertex " + std::to_string(v.vertex) + ")";
    }
    return s;
  }
};

inline ValidityReport validate(const PlumbingGraph& g) {
  ValidityReport report;
  if (g.vertex_count() == 0) {
    report.violations.push_back({Rule::Empty});
    return report;
  }
  for (const Vertex& v : g.vertices()) {
    if (v.label.boundary < 0) report.violations.push_back({Rule::NegativeBoundary, v.id});
    if (v.label.boundary > 0 && v.label.euler != 0) report.violations.push_back({Rule::EulerWithBoundary, v.id});
  }
  if (component_count(g) != 1) report.violations.push_back({Rule::Disconnected});
  return report;
}

}  // namespace plumbing
