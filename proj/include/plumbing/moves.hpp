#pragma once

// Calculus moves on plumbing graphs.
//
//   R0  reversal: flip every non-loop edge at a vertex (loops too if g<0).
//   R1  blowing down a (rho,0,0) vertex, rho = +-1:
//         leaf     u -- x            =>  u.e -= rho
//         chain    u -e1- x -e2- w   =>  u -eps0- w, u.e -= rho, w.e -= rho
//         parallel u =e1,e2= x       =>  loop eps0 at u, u.e -= 2 rho
//       with eps0 = -rho eps1 eps2.
//   R2  RP^2 absorption: two (2 delta_i,0,0) leaves on c are removed,
//       c becomes (c.e - delta, c.g # -1, c.r), delta = (delta1+delta2)/2.
//   R3  0-chain absorption: keep -eps- x(0,0,0) -epsbar- other merges into
//       (e1+e2, g1#g2, r1+r2); non-loop edges at `other` pick up the factor
//       -eps epsbar, loops at `other` stay unchanged.
//   R4  unoriented handle: x(0,0,0) joined to v by two equal-sign edges,
//       v becomes (e, g # -2, r).
//   R5  oriented handle: same with opposite signs, v becomes (e, g # 1, r).
//   R8  annulus absorption: a (0,0,1) leaf on v is removed, v.r += 1.
//
// R1 and R3 also run backwards (blow-up, 0-chain insertion). R0 is its own
// inverse.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <string_view>
#include <vector>

#include "plumbing/graph.hpp"

namespace plumbing {

enum class MoveKind : std::uint8_t { R0, R1, R2, R3, R4, R5, R8 };
enum class Direction : std::uint8_t { Forward, Inverse };

inline constexpr std::array<MoveKind, 7> kAllMoveKinds = {MoveKind::R0, MoveKind::R1, MoveKind::R2, MoveKind::R3,
                                                           MoveKind::R4, MoveKind::R5, MoveKind::R8};

inline std::string_view to_string(MoveKind k) noexcept {
  switch (k) {
    case MoveKind::R0: return "R0";
    case MoveKind::R1: return "R1";
    case MoveKind::R2: return "R2";
    case MoveKind::R3: return "R3";
    case MoveKind::R4: return "R4";
    case MoveKind::R5: return "R5";
    case MoveKind::R8: return "R8";
  }
  return "?";
}

inline std::optional<MoveKind> parse_move_kind(std::string_view s) noexcept {
  for (MoveKind k : kAllMoveKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Kinds that have a generative inverse move.
constexpr bool has_inverse_move(MoveKind k) noexcept { return k == MoveKind::R1 || k == MoveKind::R3; }

/// Kinds whose effect can be undone by some move: R0 undoes itself.
constexpr bool is_reversible(MoveKind k) noexcept { return k == MoveKind::R0 || has_inverse_move(k); }

class MoveKindSet {
 public:
  constexpr MoveKindSet() = default;
  constexpr MoveKindSet(std::initializer_list<MoveKind> kinds) {
    for (MoveKind k : kinds) insert(k);
  }
  static constexpr MoveKindSet all() {
    MoveKindSet s;
    for (MoveKind k : kAllMoveKinds) s.insert(k);
    return s;
  }
  /// Kinds flagged invertible by default.
  static constexpr MoveKindSet invertible() { return {MoveKind::R0, MoveKind::R1, MoveKind::R3}; }

  constexpr void insert(MoveKind k) { bits_ |= bit(k); }
  constexpr void erase(MoveKind k) { bits_ &= static_cast<std::uint8_t>(~bit(k)); }
  [[nodiscard]] constexpr bool contains(MoveKind k) const { return (bits_ & bit(k)) != 0; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  friend constexpr bool operator==(MoveKindSet, MoveKindSet) = default;

 private:
  static constexpr std::uint8_t bit(MoveKind k) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k)); }
  std::uint8_t bits_ = 0;
};

struct DirectionSet {
  bool forward = true;
  bool inverse = true;

  [[nodiscard]] constexpr bool contains(Direction d) const { return d == Direction::Forward ? forward : inverse; }
};

class MoveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named integer parameters of a move, kept sorted by name in one flat
/// buffer.
class MoveParams {
 public:
  using value_type = std::pair<std::string, int>;
  using const_iterator = std::vector<value_type>::const_iterator;

  MoveParams() = default;
  MoveParams(std::initializer_list<value_type> init) : items_(init) {
    std::sort(items_.begin(), items_.end());
    auto dup = std::adjacent_find(items_.begin(), items_.end(), [](const auto& a, const auto& b) { return a.first == b.first; });
    if (dup != items_.end()) throw std::invalid_argument("duplicate move parameter '" + dup->first + "'");
  }

  int& operator[](std::string_view key) {
    auto it = lower(key);
    if (it == items_.end() || it->first != key) it = items_.insert(it, {std::string(key), 0});
    return it->second;
  }
  [[nodiscard]] const_iterator find(std::string_view key) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), key, [](const value_type& a, std::string_view k) { return a.first < k; });
    return it != items_.end() && it->first == key ? it : items_.end();
  }
  [[nodiscard]] bool contains(std::string_view key) const { return find(key) != end(); }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] const_iterator begin() const { return items_.begin(); }
  [[nodiscard]] const_iterator end() const { return items_.end(); }

  friend auto operator<=>(const MoveParams&, const MoveParams&) = default;

 private:
  std::vector<value_type>::iterator lower(std::string_view key) {
    return std::lower_bound(items_.begin(), items_.end(), key, [](const value_type& a, std::string_view k) { return a.first < k; });
  }
  std::vector<value_type> items_;
};

/// A fully instantiated move. Site conventions per kind:
///
///   R0          vertices [v]
///   R1 fwd      vertices [x, u] edges [e]            leaf
///               vertices [x, u, w] edges [e1, e2]     chain, e1 joins x-u
///               vertices [x, u] edges [e1, e2]        parallel pair to u
///               params rho
///   R1 inv      vertices [u], params rho, sign        new leaf on u
///               edges [e], params rho, eps1           subdivide edge or loop;
///                                                     eps1 is the sign towards
///                                                     the smaller endpoint
///   R2          vertices [c, l1, l2] edges [e1, e2], params delta1, delta2
///   R3 fwd      vertices [x, keep, other] edges [e_keep, e_other]
///   R3 inv      vertices [v], edges = edges moving to the new vertex (loops
///               move whole), split = loops that become v--new edges,
///               params e1 g1 r1 e2 g2 r2 eps epsbar
///   R4, R5      vertices [v, x] edges [e1, e2]
///   R8          vertices [v, a] edges [e]
struct MoveApplication {
  MoveKind kind = MoveKind::R0;
  Direction dir = Direction::Forward;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::vector<EdgeId> split;
  MoveParams params;

  friend auto operator<=>(const MoveApplication&, const MoveApplication&) = default;

  [[nodiscard]] int param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw MoveError(std::string(to_string(kind)) + ": missing parameter '" + name + "'");
    return it->second;
  }
};

namespace detail {

[[noreturn]] inline void mismatch(MoveKind k, const std::string& why) {
  throw MoveError(std::string(to_string(k)) + ": pattern mismatch: " + why);
}

inline Sign param_sign(const MoveApplication& app, const std::string& name) {
  const int v = app.param(name);
  if (v != 1 && v != -1) mismatch(app.kind, name + " must be +-1");
  return v == 1 ? Sign::Plus : Sign::Minus;
}

inline void expect_shape(const MoveApplication& app, std::size_t nv, std::size_t ne) {
  if (app.vertices.size() != nv || app.edges.size() != ne || !app.split.empty())
    mismatch(app.kind, "unexpected site shape");
}

inline void expect_params(const MoveApplication& app, std::initializer_list<const char*> names) {
  if (app.params.size() != names.size()) mismatch(app.kind, "unexpected parameters");
  for (const char* n : names)
    if (!app.params.contains(n)) mismatch(app.kind, std::string("missing parameter '") + n + "'");
}

inline void require_vertex(const PlumbingGraph& g, const MoveApplication& app, VertexId v) {
  if (!g.has_vertex(v)) mismatch(app.kind, "unknown vertex " + std::to_string(v));
}

inline const Edge& require_edge(const PlumbingGraph& g, const MoveApplication& app, EdgeId e) {
  if (!g.has_edge(e)) mismatch(app.kind, "unknown edge " + std::to_string(e));
  return g.edge(e);
}

/// Non-loop edge `e` between `a` and `b`.
inline const Edge& require_link(const PlumbingGraph& g, const MoveApplication& app, EdgeId e, VertexId a, VertexId b) {
  const Edge& edge = require_edge(g, app, e);
  if (edge.is_loop() || !edge.touches(a) || edge.other(a) != b) mismatch(app.kind, "edge does not join the site");
  return edge;
}

inline void shift_euler(PlumbingGraph& g, VertexId v, int delta) {
  VertexLabel l = g.label(v);
  l.euler += delta;
  g.set_label(v, l.normalized());
}

/// The incident edges of `x` are exactly `expected` (as a set), none a loop.
inline bool incident_exactly(const PlumbingGraph& g, VertexId x, std::vector<EdgeId> expected) {
  std::sort(expected.begin(), expected.end());
  const auto inc = g.incident_edges(x);
  if (inc != expected) return false;
  return std::none_of(inc.begin(), inc.end(), [&](EdgeId e) { return g.edge(e).is_loop(); });
}

inline bool is_unit(const VertexLabel& l) { return (l.euler == 1 || l.euler == -1) && l.genus == 0 && l.boundary == 0; }
inline bool is_zero(const VertexLabel& l) { return l == VertexLabel{0, 0, 0}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// R0

inline PlumbingGraph apply_r0(const PlumbingGraph& graph, VertexId v) {
  if (!graph.has_vertex(v)) throw MoveError("R0: unknown vertex " + std::to_string(v));
  PlumbingGraph out = graph;
  const bool flip_loops = graph.label(v).genus < 0;
  for (const Edge& e : graph.edges()) {
    if (!e.touches(v)) continue;
    if (!e.is_loop() || flip_loops) out.set_sign(e.id, -e.sign);
  }
  return out;
}

// ---------------------------------------------------------------------------
// R1

namespace detail {

inline PlumbingGraph r1_forward(const PlumbingGraph& graph, const MoveApplication& app) {
  expect_params(app, {"rho"});
  if (app.vertices.empty() || !app.split.empty()) mismatch(app.kind, "unexpected site shape");
  const VertexId x = app.vertices[0];
  require_vertex(graph, app, x);
  const int rho = app.param("rho");
  const VertexLabel& lx = graph.label(x);
  if (!is_unit(lx) || lx.euler != rho) mismatch(app.kind, "blown-down vertex must be (rho,0,0)");
  for (VertexId v : app.vertices) require_vertex(graph, app, v);

  PlumbingGraph out = graph;
  if (app.vertices.size() == 2 && app.edges.size() == 1) {
    const VertexId u = app.vertices[1];
    require_link(graph, app, app.edges[0], x, u);
    if (!incident_exactly(graph, x, app.edges)) mismatch(app.kind, "vertex is not a leaf");
    out.remove_vertex(x);
    shift_euler(out, u, -rho);
    return out;
  }
  if (app.edges.size() != 2) mismatch(app.kind, "unexpected site shape");
  if (!incident_exactly(graph, x, app.edges)) mismatch(app.kind, "vertex degree does not match");
  const Sign rho_sign = rho == 1 ? Sign::Plus : Sign::Minus;
  if (app.vertices.size() == 2) {
    const VertexId u = app.vertices[1];
    const Edge& e1 = require_link(graph, app, app.edges[0], x, u);
    const Edge& e2 = require_link(graph, app, app.edges[1], x, u);
    const Sign eps0 = -(rho_sign * e1.sign * e2.sign);
    out.remove_vertex(x);
    out.add_edge(u, u, eps0);
    shift_euler(out, u, -2 * rho);
    return out;
  }
  if (app.vertices.size() != 3) mismatch(app.kind, "unexpected site shape");
  const VertexId u = app.vertices[1], w = app.vertices[2];
  if (u == w) mismatch(app.kind, "chain neighbours must differ");
  const Edge& e1 = require_link(graph, app, app.edges[0], x, u);
  const Edge& e2 = require_link(graph, app, app.edges[1], x, w);
  const Sign eps0 = -(rho_sign * e1.sign * e2.sign);
  out.remove_vertex(x);
  out.add_edge(u, w, eps0);
  shift_euler(out, u, -rho);
  shift_euler(out, w, -rho);
  return out;
}

inline PlumbingGraph r1_inverse(const PlumbingGraph& graph, const MoveApplication& app) {
  const int rho = app.param("rho");
  if (rho != 1 && rho != -1) mismatch(app.kind, "rho must be +-1");
  const Sign rho_sign = rho == 1 ? Sign::Plus : Sign::Minus;
  PlumbingGraph out = graph;
  if (app.vertices.size() == 1 && app.edges.empty() && app.split.empty()) {
    expect_params(app, {"rho", "sign"});
    const VertexId u = app.vertices[0];
    require_vertex(graph, app, u);
    const Sign s = param_sign(app, "sign");
    const VertexId x = out.add_vertex({rho, 0, 0});
    out.add_edge(u, x, s);
    shift_euler(out, u, rho);
    return out;
  }
  expect_shape(app, 0, 1);
  expect_params(app, {"rho", "eps1"});
  const Edge e0 = require_edge(graph, app, app.edges[0]);
  const Sign eps1 = param_sign(app, "eps1");
  const Sign eps2 = -(rho_sign * eps1 * e0.sign);
  out.remove_edge(e0.id);
  const VertexId x = out.add_vertex({rho, 0, 0});
  out.add_edge(e0.u, x, eps1);
  out.add_edge(x, e0.v, eps2);
  if (e0.is_loop()) {
    shift_euler(out, e0.u, 2 * rho);
  } else {
    shift_euler(out, e0.u, rho);
    shift_euler(out, e0.v, rho);
  }
  return out;
}

}  // namespace detail

inline PlumbingGraph apply_r1(const PlumbingGraph& graph, const MoveApplication& app) {
  if (app.kind != MoveKind::R1) throw MoveError("apply_r1: wrong move kind");
  return app.dir == Direction::Forward ? detail::r1_forward(graph, app) : detail::r1_inverse(graph, app);
}

// ---------------------------------------------------------------------------
// R2

inline PlumbingGraph apply_r2(const PlumbingGraph& graph, const MoveApplication& app) {
  using namespace detail;
  if (app.kind != MoveKind::R2) throw MoveError("apply_r2: wrong move kind");
  if (app.dir != Direction::Forward) throw MoveError("R2: no inverse move");
  expect_shape(app, 3, 2);
  expect_params(app, {"delta1", "delta2"});
  const VertexId c = app.vertices[0];
  const int d1 = app.param("delta1"), d2 = app.param("delta2");
  if ((d1 != 1 && d1 != -1) || (d2 != 1 && d2 != -1)) mismatch(app.kind, "delta must be +-1");
  for (VertexId v : app.vertices) require_vertex(graph, app, v);
  const int deltas[2] = {d1, d2};
  for (std::size_t i = 0; i < 2; ++i) {
    const VertexId leaf = app.vertices[i + 1];
    if (leaf == c) mismatch(app.kind, "leaf equals centre");
    if (graph.label(leaf) != VertexLabel{2 * deltas[i], 0, 0}) mismatch(app.kind, "leaf must be (2 delta,0,0)");
    require_link(graph, app, app.edges[i], leaf, c);
    if (!incident_exactly(graph, leaf, {app.edges[i]})) mismatch(app.kind, "leaf has other edges");
  }
  if (app.vertices[1] == app.vertices[2]) mismatch(app.kind, "leaves must differ");
  const int delta = (d1 + d2) / 2;
  PlumbingGraph out = graph;
  out.remove_vertex(app.vertices[1]);
  out.remove_vertex(app.vertices[2]);
  VertexLabel l = graph.label(c);
  l.euler -= delta;
  l.genus = genus_add(l.genus, -1);
  out.set_label(c, l.normalized());
  return out;
}

// ---------------------------------------------------------------------------
// R3

namespace detail {

inline PlumbingGraph r3_forward(const PlumbingGraph& graph, const MoveApplication& app) {
  expect_shape(app, 3, 2);
  expect_params(app, {});
  const VertexId x = app.vertices[0], keep = app.vertices[1], other = app.vertices[2];
  for (VertexId v : app.vertices) require_vertex(graph, app, v);
  if (keep == other || keep == x || other == x) mismatch(app.kind, "chain ends must be distinct");
  if (!is_zero(graph.label(x))) mismatch(app.kind, "chain vertex must be (0,0,0)");
  const Edge& ek = require_link(graph, app, app.edges[0], x, keep);
  const Edge& eo = require_link(graph, app, app.edges[1], x, other);
  if (!incident_exactly(graph, x, app.edges)) mismatch(app.kind, "chain vertex must have degree 2");
  const Sign twist = -(ek.sign * eo.sign);

  PlumbingGraph out = graph;
  const VertexLabel a = graph.label(keep), b = graph.label(other);
  for (const Edge& e : graph.edges()) {
    if (!e.touches(other) || e.id == eo.id) continue;
    if (e.is_loop()) {
      out.set_edge(e.id, keep, keep, e.sign);
    } else {
      const VertexId far = e.other(other);
      out.set_edge(e.id, keep, far == other ? keep : far, twist * e.sign);
    }
  }
  out.remove_vertex(x);
  out.remove_vertex(other);
  out.set_label(keep, VertexLabel{a.euler + b.euler, genus_add(a.genus, b.genus), a.boundary + b.boundary}.normalized());
  return out;
}

inline PlumbingGraph r3_inverse(const PlumbingGraph& graph, const MoveApplication& app) {
  if (app.vertices.size() != 1) mismatch(app.kind, "unexpected site shape");
  expect_params(app, {"e1", "g1", "r1", "e2", "g2", "r2", "eps", "epsbar"});
  const VertexId v = app.vertices[0];
  require_vertex(graph, app, v);
  const VertexLabel l = graph.label(v);
  const VertexLabel l1{app.param("e1"), app.param("g1"), app.param("r1")};
  const VertexLabel l2{app.param("e2"), app.param("g2"), app.param("r2")};
  if (l1.boundary < 0 || l2.boundary < 0) mismatch(app.kind, "negative boundary count");
  if (l1.boundary + l2.boundary != l.boundary) mismatch(app.kind, "boundary counts do not add up");
  if (genus_add(l1.genus, l2.genus) != l.genus) mismatch(app.kind, "genera do not compose");
  if (l.boundary == 0 && l1.euler + l2.euler != l.euler) mismatch(app.kind, "Euler numbers do not add up");
  const Sign eps = param_sign(app, "eps"), epsbar = param_sign(app, "epsbar");
  const Sign twist = -(eps * epsbar);

  std::vector<EdgeId> seen;
  for (EdgeId id : app.edges) {
    if (!require_edge(graph, app, id).touches(v)) mismatch(app.kind, "moved edge not incident");
    seen.push_back(id);
  }
  for (EdgeId id : app.split) {
    if (!require_edge(graph, app, id).is_loop() || !graph.edge(id).touches(v)) mismatch(app.kind, "split edge must be a loop at the vertex");
    seen.push_back(id);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) mismatch(app.kind, "edge listed twice");

  PlumbingGraph out = graph;
  out.set_label(v, l1.normalized());
  const VertexId x = out.add_vertex({0, 0, 0});
  const VertexId y = out.add_vertex(l2.normalized());
  out.add_edge(v, x, eps);
  out.add_edge(x, y, epsbar);
  for (EdgeId id : app.edges) {
    const Edge& e = graph.edge(id);
    if (e.is_loop())
      out.set_edge(id, y, y, e.sign);
    else
      out.set_edge(id, y, e.other(v), twist * e.sign);
  }
  for (EdgeId id : app.split) out.set_edge(id, v, y, twist * graph.edge(id).sign);
  return out;
}

}  // namespace detail

inline PlumbingGraph apply_r3(const PlumbingGraph& graph, const MoveApplication& app) {
  if (app.kind != MoveKind::R3) throw MoveError("apply_r3: wrong move kind");
  return app.dir == Direction::Forward ? detail::r3_forward(graph, app) : detail::r3_inverse(graph, app);
}

// ---------------------------------------------------------------------------
// R4, R5

namespace detail {

inline PlumbingGraph handle_absorption(const PlumbingGraph& graph, const MoveApplication& app, bool oriented) {
  if (app.dir != Direction::Forward) throw MoveError(std::string(to_string(app.kind)) + ": no inverse move");
  expect_shape(app, 2, 2);
  expect_params(app, {});
  const VertexId v = app.vertices[0], x = app.vertices[1];
  require_vertex(graph, app, v);
  require_vertex(graph, app, x);
  if (v == x) mismatch(app.kind, "handle vertex equals base");
  if (!is_zero(graph.label(x))) mismatch(app.kind, "handle vertex must be (0,0,0)");
  const Edge& e1 = require_link(graph, app, app.edges[0], x, v);
  const Edge& e2 = require_link(graph, app, app.edges[1], x, v);
  if (app.edges[0] == app.edges[1]) mismatch(app.kind, "edges must differ");
  if (!incident_exactly(graph, x, app.edges)) mismatch(app.kind, "handle vertex must have degree 2");
  if ((e1.sign != e2.sign) != oriented) mismatch(app.kind, oriented ? "edge signs must differ" : "edge signs must agree");
  PlumbingGraph out = graph;
  out.remove_vertex(x);
  VertexLabel l = graph.label(v);
  l.genus = genus_add(l.genus, oriented ? 1 : -2);
  out.set_label(v, l);
  return out;
}

}  // namespace detail

inline PlumbingGraph apply_r4(const PlumbingGraph& graph, const MoveApplication& app) {
  if (app.kind != MoveKind::R4) throw MoveError("apply_r4: wrong move kind");
  return detail::handle_absorption(graph, app, false);
}

inline PlumbingGraph apply_r5(const PlumbingGraph& graph, const MoveApplication& app) {
  if (app.kind != MoveKind::R5) throw MoveError("apply_r5: wrong move kind");
  return detail::handle_absorption(graph, app, true);
}

// ---------------------------------------------------------------------------
// R8

inline PlumbingGraph apply_r8(const PlumbingGraph& graph, const MoveApplication& app) {
  using namespace detail;
  if (app.kind != MoveKind::R8) throw MoveError("apply_r8: wrong move kind");
  if (app.dir != Direction::Forward) throw MoveError("R8: no inverse move");
  expect_shape(app, 2, 1);
  expect_params(app, {});
  const VertexId v = app.vertices[0], a = app.vertices[1];
  require_vertex(graph, app, v);
  require_vertex(graph, app, a);
  if (v == a) mismatch(app.kind, "annulus equals base");
  if (graph.label(a) != VertexLabel{0, 0, 1}) mismatch(app.kind, "annulus vertex must be (0,0,1)");
  require_link(graph, app, app.edges[0], a, v);
  if (!incident_exactly(graph, a, app.edges)) mismatch(app.kind, "annulus vertex must be a leaf");
  PlumbingGraph out = graph;
  out.remove_vertex(a);
  VertexLabel l = graph.label(v);
  l.boundary += 1;
  out.set_label(v, l.normalized());
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

inline PlumbingGraph apply_move(const PlumbingGraph& graph, const MoveApplication& app) {
  switch (app.kind) {
    case MoveKind::R0:
      if (app.dir != Direction::Forward) throw MoveError("R0: it is its own inverse; use Forward");
      detail::expect_shape(app, 1, 0);
      detail::expect_params(app, {});
      return apply_r0(graph, app.vertices[0]);
    case MoveKind::R1: return apply_r1(graph, app);
    case MoveKind::R2: return apply_r2(graph, app);
    case MoveKind::R3: return apply_r3(graph, app);
    case MoveKind::R4: return apply_r4(graph, app);
    case MoveKind::R5: return apply_r5(graph, app);
    case MoveKind::R8: return apply_r8(graph, app);
  }
  throw MoveError("unknown move kind");
}

/// Vertex-count change made by a forward move; inverses negate it.
inline int vertex_delta(const MoveApplication& app) {
  int d = 0;
  switch (app.kind) {
    case MoveKind::R0: d = 0; break;
    case MoveKind::R1: d = -1; break;
    case MoveKind::R2: d = -2; break;
    case MoveKind::R3: d = -2; break;
    case MoveKind::R4: case MoveKind::R5: case MoveKind::R8: d = -1; break;
  }
  return app.dir == Direction::Forward ? d : -d;
}

/// True when `v` is named by the site directly or as an endpoint of a site edge.
inline bool touches(const PlumbingGraph& g, const MoveApplication& app, VertexId v) {
  if (std::find(app.vertices.begin(), app.vertices.end(), v) != app.vertices.end()) return true;
  auto edge_touches = [&](EdgeId id) { return g.has_edge(id) && g.edge(id).touches(v); };
  return std::any_of(app.edges.begin(), app.edges.end(), edge_touches) ||
         std::any_of(app.split.begin(), app.split.end(), edge_touches);
}

// ---------------------------------------------------------------------------
// Enumeration

/// Largest edge subset the 0-chain insertion enumerator moves onto the new
/// vertex. apply_move accepts any subset; enumeration is restricted to keep
/// branching polynomial.
inline constexpr std::size_t kMaxInsertionEdges = 2;

namespace detail {

struct Enumerator {
  const PlumbingGraph& g;
  MoveKindSet kinds;
  DirectionSet dirs;
  std::vector<MoveApplication>& out;
  std::optional<VertexId> focus{};  // when set, only emit sites touching it

  bool want(MoveKind k, Direction d) const { return kinds.contains(k) && dirs.contains(d); }

  bool names_focus(const std::vector<VertexId>& vs) const {
    return !focus || std::find(vs.begin(), vs.end(), *focus) != vs.end();
  }
  bool edge_hits_focus(EdgeId id) const { return !focus || g.edge(id).touches(*focus); }

  void emit(MoveApplication app) {
    if (names_focus(app.vertices)) out.push_back(std::move(app));
  }

  // Every application is produced from exactly one anchor vertex, so running
  // the enumerator on distinct anchors never yields duplicates.
  void anchor(VertexId a) {
    const VertexLabel& la = g.label(a);
    const bool at_focus = !focus || *focus == a;
    std::vector<EdgeId> links, loops;
    for (const Edge& e : g.edges())
      if (e.touches(a)) (e.is_loop() ? loops : links).push_back(e.id);

    if (at_focus && want(MoveKind::R0, Direction::Forward)) out.push_back({MoveKind::R0, Direction::Forward, {a}, {}, {}, {}});

    if (want(MoveKind::R1, Direction::Forward) && is_unit(la) && loops.empty()) {
      if (links.size() == 1) {
        emit({MoveKind::R1, Direction::Forward, {a, g.edge(links[0]).other(a)}, {links[0]}, {}, {{"rho", la.euler}}});
      } else if (links.size() == 2) {
        const VertexId u = g.edge(links[0]).other(a), w = g.edge(links[1]).other(a);
        if (u == w)
          emit({MoveKind::R1, Direction::Forward, {a, u}, {links[0], links[1]}, {}, {{"rho", la.euler}}});
        else
          emit({MoveKind::R1, Direction::Forward, {a, u, w}, {links[0], links[1]}, {}, {{"rho", la.euler}}});
      }
    }

    if (want(MoveKind::R1, Direction::Inverse)) {
      if (at_focus)
        for (int rho : {-1, 1})
          for (int s : {-1, 1}) out.push_back({MoveKind::R1, Direction::Inverse, {a}, {}, {}, {{"rho", rho}, {"sign", s}}});
      for (const Edge& e : g.edges()) {
        if (e.u != a || !edge_hits_focus(e.id)) continue;  // anchored at the smaller endpoint
        for (int rho : {-1, 1})
          for (int s : {-1, 1}) out.push_back({MoveKind::R1, Direction::Inverse, {}, {e.id}, {}, {{"rho", rho}, {"eps1", s}}});
      }
    }

    if (want(MoveKind::R2, Direction::Forward) && links.size() >= 2) {
      std::vector<std::pair<VertexId, EdgeId>> leaves;
      for (EdgeId id : links) {
        const VertexId l = g.edge(id).other(a);
        const VertexLabel& ll = g.label(l);
        if ((ll.euler == 2 || ll.euler == -2) && ll.genus == 0 && ll.boundary == 0 && degree(g, l) == 1)
          leaves.emplace_back(l, id);
      }
      std::sort(leaves.begin(), leaves.end());
      for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j) {
          const auto [l1, e1] = leaves[i];
          const auto [l2, e2] = leaves[j];
          emit({MoveKind::R2, Direction::Forward, {a, l1, l2}, {e1, e2}, {},
                {{"delta1", g.label(l1).euler / 2}, {"delta2", g.label(l2).euler / 2}}});
        }
    }

    if (is_zero(la) && loops.empty() && links.size() == 2) {
      const VertexId u = g.edge(links[0]).other(a), w = g.edge(links[1]).other(a);
      if (u != w && want(MoveKind::R3, Direction::Forward)) {
        emit({MoveKind::R3, Direction::Forward, {a, u, w}, {links[0], links[1]}, {}, {}});
        emit({MoveKind::R3, Direction::Forward, {a, w, u}, {links[1], links[0]}, {}, {}});
      }
      if (u == w) {
        const bool same = g.edge(links[0]).sign == g.edge(links[1]).sign;
        const MoveKind k = same ? MoveKind::R4 : MoveKind::R5;
        if (want(k, Direction::Forward)) emit({k, Direction::Forward, {u, a}, {links[0], links[1]}, {}, {}});
      }
    }

    if (want(MoveKind::R3, Direction::Inverse)) {
      const MoveParams params{{"e1", la.euler}, {"g1", la.genus}, {"r1", la.boundary}, {"e2", 0},
                                              {"g2", 0},        {"r2", 0},        {"eps", 1},           {"epsbar", -1}};
      if (at_focus) out.push_back({MoveKind::R3, Direction::Inverse, {a}, {}, {}, params});
      for (std::size_t i = 0; i < links.size(); ++i) {
        const bool hit_i = at_focus || edge_hits_focus(links[i]);
        if (hit_i) out.push_back({MoveKind::R3, Direction::Inverse, {a}, {links[i]}, {}, params});
        if constexpr (kMaxInsertionEdges >= 2)
          for (std::size_t j = i + 1; j < links.size(); ++j)
            if (hit_i || edge_hits_focus(links[j]))
              out.push_back({MoveKind::R3, Direction::Inverse, {a}, {links[i], links[j]}, {}, params});
      }
    }

    if (want(MoveKind::R8, Direction::Forward) && la == VertexLabel{0, 0, 1} && links.size() == 1 && loops.empty())
      emit({MoveKind::R8, Direction::Forward, {g.edge(links[0]).other(a), a}, {links[0]}, {}, {}});
  }
};

}  // namespace detail

/// Every application of the requested kinds and directions, sorted.
inline std::vector<MoveApplication> enumerate_moves(const PlumbingGraph& g, MoveKindSet kinds,
                                                    DirectionSet dirs = {}) {
  std::vector<MoveApplication> out;
  if (kinds.empty()) return out;
  detail::Enumerator en{g, kinds, dirs, out};
  for (const Vertex& v : g.vertices()) en.anchor(v.id);
  std::sort(out.begin(), out.end());
  return out;
}

/// Applications whose site touches `v`, sorted.
inline std::vector<MoveApplication> enumerate_moves_at(const PlumbingGraph& g, VertexId v, MoveKindSet kinds,
                                                       DirectionSet dirs = {}) {
  std::vector<MoveApplication> out;
  if (kinds.empty()) return out;
  std::vector<VertexId> anchors{v};
  for (EdgeId id : g.incident_edges(v)) anchors.push_back(g.edge(id).other(v));
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  detail::Enumerator en{g, kinds, dirs, out, v};
  for (VertexId a : anchors) en.anchor(a);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Inversion

/// Builds an application on `after` that undoes `app`, where
/// `after == apply_move(before, app)`. The result is isomorphic to `before`;
/// vertices created along the way get fresh ids. Throws for kinds without an
/// implemented inverse.
inline MoveApplication inverse_of(const PlumbingGraph& before, const MoveApplication& app, const PlumbingGraph& after) {
  switch (app.kind) {
    case MoveKind::R0: return app;
    case MoveKind::R1: {
      if (app.dir == Direction::Inverse) {
        const VertexId x = before.next_vertex_id();
        std::vector<MoveApplication> found;
        detail::Enumerator en{after, {MoveKind::R1}, {true, false}, found};
        en.anchor(x);
        if (found.size() != 1) throw MoveError("R1: cannot locate inserted vertex");
        return found.front();
      }
      const int rho = app.param("rho");
      if (app.edges.size() == 1)
        return {MoveKind::R1, Direction::Inverse, {app.vertices[1]}, {}, {}, {{"rho", rho}, {"sign", to_int(before.edge(app.edges[0]).sign)}}};
      const EdgeId created = before.next_edge_id();
      const Edge& ne = after.edge(created);
      // eps1 is the sign on the half towards the smaller endpoint
      Sign eps1 = before.edge(app.edges[0]).sign;
      if (app.vertices.size() == 3 && ne.u != app.vertices[1]) eps1 = before.edge(app.edges[1]).sign;
      return {MoveKind::R1, Direction::Inverse, {}, {created}, {}, {{"rho", rho}, {"eps1", to_int(eps1)}}};
    }
    case MoveKind::R3: {
      if (app.dir == Direction::Inverse) {
        const VertexId x = before.next_vertex_id();
        const EdgeId e0 = before.next_edge_id();
        return {MoveKind::R3, Direction::Forward, {x, app.vertices[0], x + 1}, {e0, e0 + 1}, {}, {}};
      }
      const VertexId keep = app.vertices[1], other = app.vertices[2];
      const VertexLabel a = before.label(keep), b = before.label(other);
      MoveApplication inv{MoveKind::R3, Direction::Inverse, {keep}, {}, {},
                          {{"e1", a.euler}, {"g1", a.genus}, {"r1", a.boundary},
                           {"e2", b.euler}, {"g2", b.genus}, {"r2", b.boundary},
                           {"eps", to_int(before.edge(app.edges[0]).sign)},
                           {"epsbar", to_int(before.edge(app.edges[1]).sign)}}};
      for (const Edge& e : before.edges()) {
        if (!e.touches(other) || e.id == app.edges[1]) continue;
        if (!e.is_loop() && e.other(other) == keep)
          inv.split.push_back(e.id);
        else
          inv.edges.push_back(e.id);
      }
      return inv;
    }
    default: throw MoveError(std::string(to_string(app.kind)) + ": no inverse move");
  }
}

/// Rewrites every id in `app` through an isomorphism.
inline MoveApplication translate(const MoveApplication& app, const std::map<VertexId, VertexId>& vmap,
                                 const std::map<EdgeId, EdgeId>& emap) {
  MoveApplication out = app;
  for (VertexId& v : out.vertices) v = vmap.at(v);
  for (EdgeId& e : out.edges) e = emap.at(e);
  for (EdgeId& e : out.split) e = emap.at(e);
  return out;
}

}  // namespace plumbing
