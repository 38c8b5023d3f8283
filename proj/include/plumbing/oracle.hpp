#pragma once

// Bounded bidirectional search for move sequences between plumbing graphs,
// and replay-based certificate checking.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "plumbing/graph.hpp"
#include "plumbing/isomorphism.hpp"
#include "plumbing/json_io.hpp"
#include "plumbing/moves.hpp"

namespace plumbing {

/// Replaying `moves` from `start` reaches a graph isomorphic to the one
/// reached by replaying `end_moves` from `end`. `end_moves` is empty whenever
/// the search could invert the whole back half.
struct Certificate {
  PlumbingGraph start;
  std::vector<MoveApplication> moves;
  PlumbingGraph end;
  std::vector<MoveApplication> end_moves;  // applied to `end`, in order
};

struct SearchBudget {
  std::size_t max_states = 100000;
  std::size_t max_depth = 6;
  std::chrono::milliseconds time_limit{60000};
};

struct Equivalent {
  Certificate certificate;
  std::size_t states_explored = 0;
};

struct Unknown {
  std::size_t states_explored = 0;
  std::string reason;
};

using Verdict = std::variant<Equivalent, Unknown>;

struct SearchOptions {
  MoveKindSet kinds = MoveKindSet::all();             // expanded forwards
  MoveKindSet invertible = MoveKindSet::invertible();  // also expanded backwards where an inverse move exists
};

// ---------------------------------------------------------------------------
// Certificates

struct ReplayResult {
  bool valid = false;
  std::optional<std::size_t> failed_step;  // index in the JSON move list
  std::string reason;
};

inline ReplayResult check_certificate(const Certificate& cert) {
  ReplayResult res;
  if (!validate(cert.start).ok() || !validate(cert.end).ok()) {
    res.reason = "invalid endpoint graph";
    return res;
  }
  PlumbingGraph a = cert.start;
  for (std::size_t i = 0; i < cert.moves.size(); ++i) {
    try {
      a = apply_move(a, cert.moves[i]);
    } catch (const std::exception& e) {
      res.failed_step = i;
      res.reason = e.what();
      return res;
    }
  }
  PlumbingGraph b = cert.end;
  for (std::size_t k = 0; k < cert.end_moves.size(); ++k) {
    try {
      b = apply_move(b, cert.end_moves[k]);
    } catch (const std::exception& e) {
      // listed in reverse after the forward moves
      res.failed_step = cert.moves.size() + cert.end_moves.size() - 1 - k;
      res.reason = e.what();
      return res;
    }
  }
  if (!are_isomorphic(a, b)) {
    res.failed_step = cert.moves.size() + cert.end_moves.size();
    res.reason = "replayed graphs are not isomorphic";
    return res;
  }
  res.valid = true;
  return res;
}

inline bool verify_certificate(const Certificate& cert) {
  try {
    return check_certificate(cert).valid;
  } catch (const std::exception&) {
    return false;
  }
}

/// Moves replayed from the end graph are listed after the forward moves in
/// reverse application order and tagged "replay": "from_end".
inline json certificate_to_json(const Certificate& cert) {
  json moves = moves_to_json(cert.moves);
  for (auto it = cert.end_moves.rbegin(); it != cert.end_moves.rend(); ++it) {
    json m = move_to_json(*it);
    m["replay"] = "from_end";
    moves.push_back(std::move(m));
  }
  return {{"start", graph_to_json(cert.start)}, {"moves", std::move(moves)}, {"end", graph_to_json(cert.end)}};
}

inline Certificate certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end") || !j.contains("moves"))
    throw FormatError("certificate needs 'start', 'moves' and 'end'");
  Certificate cert{graph_from_json(j.at("start")), {}, graph_from_json(j.at("end")), {}};
  if (!j.at("moves").is_array()) throw FormatError("'moves' must be an array");
  std::vector<MoveApplication> tail;
  for (const json& m : j.at("moves")) {
    const bool from_end = m.is_object() && m.value("replay", std::string()) == "from_end";
    if (from_end)
      tail.push_back(move_from_json(m));
    else if (!tail.empty())
      throw FormatError("forward moves must precede from_end moves");
    else
      cert.moves.push_back(move_from_json(m));
  }
  cert.end_moves.assign(tail.rbegin(), tail.rend());
  return cert;
}

// ---------------------------------------------------------------------------
// Search

namespace detail {

struct SearchNode {
  PlumbingGraph graph;
  CanonicalForm form;
  std::ptrdiff_t parent = -1;
  MoveApplication move;  // move from parent to this node
};

struct SearchSide {
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, std::size_t> index;  // canonical bytes -> node
  std::vector<std::size_t> frontier;
  std::size_t depth = 0;

  std::vector<std::size_t> path_to(std::size_t node) const {
    std::vector<std::size_t> path;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(node); i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      path.push_back(static_cast<std::size_t>(i));
    std::reverse(path.begin(), path.end());
    return path;
  }
};

inline std::vector<MoveApplication> expansion_moves(const PlumbingGraph& g, const SearchOptions& opt) {
  std::vector<MoveApplication> apps = enumerate_moves(g, opt.kinds, {true, false});
  MoveKindSet backwards;
  for (MoveKind k : kAllMoveKinds)
    if (opt.invertible.contains(k) && has_inverse_move(k)) backwards.insert(k);
  if (!backwards.empty()) {
    auto inv = enumerate_moves(g, backwards, {false, true});
    apps.insert(apps.end(), inv.begin(), inv.end());
    std::sort(apps.begin(), apps.end());
  }
  return apps;
}

/// Joins the two search trees at a shared isomorphism class.
inline Certificate stitch(const SearchSide& fwd, std::size_t a, const SearchSide& bwd, std::size_t b,
                          const PlumbingGraph& start, const PlumbingGraph& end, const SearchOptions& opt) {
  Certificate cert{start, {}, end, {}};
  const auto pa = fwd.path_to(a);
  for (std::size_t i = 1; i < pa.size(); ++i) cert.moves.push_back(fwd.nodes[pa[i]].move);

  const auto pb = bwd.path_to(b);
  bool invertible = true;
  for (std::size_t i = 1; i < pb.size(); ++i) {
    const MoveKind k = bwd.nodes[pb[i]].move.kind;
    invertible = invertible && is_reversible(k) && (k == MoveKind::R0 || opt.invertible.contains(k));
  }
  if (!invertible) {
    for (std::size_t i = 1; i < pb.size(); ++i) cert.end_moves.push_back(bwd.nodes[pb[i]].move);
    return cert;
  }

  PlumbingGraph cur = fwd.nodes[a].graph;
  for (std::size_t i = pb.size() - 1; i >= 1; --i) {
    const PlumbingGraph& before = bwd.nodes[pb[i - 1]].graph;
    const PlumbingGraph& after = bwd.nodes[pb[i]].graph;
    const auto iso = find_isomorphism(after, cur);
    if (!iso) throw MoveError("internal: stitched state lost isomorphism");
    const MoveApplication undo = translate(inverse_of(before, bwd.nodes[pb[i]].move, after), iso->vertices, iso->edges);
    cur = apply_move(cur, undo);
    cert.moves.push_back(undo);
  }
  return cert;
}

inline bool less_by_size(const SearchSide& side, std::size_t x, std::size_t y) {
  const auto& gx = side.nodes[x];
  const auto& gy = side.nodes[y];
  return std::forward_as_tuple(gx.graph.vertex_count(), gx.graph.edge_count(), gx.form) <
         std::forward_as_tuple(gy.graph.vertex_count(), gy.graph.edge_count(), gy.form);
}

}  // namespace detail

/// Semi-decision search. Layers are expanded breadth-first from whichever
/// side has the smaller frontier; inside a layer states are visited smallest
/// graph first. Never reports non-equivalence.
inline Verdict bounded_search(const PlumbingGraph& g1, const PlumbingGraph& g2, const SearchBudget& budget,
                              const SearchOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + budget.time_limit;
  for (const PlumbingGraph* g : {&g1, &g2})
    if (auto report = validate(*g); !report.ok()) throw GraphError("invalid graph: " + report.describe());

  const PlumbingGraph start = g1.compacted();
  const PlumbingGraph end = g2.compacted();
  detail::SearchSide sides[2];
  const PlumbingGraph* roots[2] = {&start, &end};
  for (int s = 0; s < 2; ++s) {
    CanonicalForm form = canonical_form_unchecked(*roots[s]);
    sides[s].index.emplace(form.bytes, 0);
    sides[s].nodes.push_back({*roots[s], std::move(form), -1, {}});
    sides[s].frontier.push_back(0);
  }
  std::size_t states = 2;
  if (sides[0].nodes[0].form == sides[1].nodes[0].form) return Equivalent{Certificate{start, {}, end, {}}, states};

  while (true) {
    int s = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    if (sides[s].frontier.empty()) s = 1 - s;
    if (sides[s].frontier.empty()) return Unknown{states, "search space exhausted"};
    if (sides[0].depth + sides[1].depth + 1 > budget.max_depth) return Unknown{states, "depth exhausted"};

    detail::SearchSide& side = sides[s];
    const detail::SearchSide& other = sides[1 - s];
    std::sort(side.frontier.begin(), side.frontier.end(),
              [&](std::size_t x, std::size_t y) { return detail::less_by_size(side, x, y); });
    std::vector<std::size_t> next;
    for (std::size_t parent : side.frontier) {
      if (clock::now() > deadline) return Unknown{states, "time exhausted"};
      const std::vector<MoveApplication> apps = detail::expansion_moves(side.nodes[parent].graph, opt);
      for (const MoveApplication& app : apps) {
        PlumbingGraph child = apply_move(side.nodes[parent].graph, app);
        CanonicalForm form = canonical_form_unchecked(child);
        if (side.index.contains(form.bytes)) continue;
        const std::size_t id = side.nodes.size();
        side.index.emplace(form.bytes, id);
        auto hit = other.index.find(form.bytes);
        side.nodes.push_back({std::move(child), std::move(form), static_cast<std::ptrdiff_t>(parent), app});
        ++states;
        if (hit != other.index.end()) {
          Certificate cert = s == 0 ? detail::stitch(sides[0], id, sides[1], hit->second, start, end, opt)
                                    : detail::stitch(sides[0], hit->second, sides[1], id, start, end, opt);
          return Equivalent{std::move(cert), states};
        }
        if (states >= budget.max_states) return Unknown{states, "states exhausted"};
        next.push_back(id);
      }
    }
    side.frontier = std::move(next);
    ++side.depth;
  }
}

/// Greedily applies size-reducing forward moves, first in enumeration order.
inline std::pair<PlumbingGraph, std::vector<MoveApplication>> reduce(const PlumbingGraph& graph, const SearchBudget& budget,
                                                                      MoveKindSet kinds = MoveKindSet::all()) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + budget.time_limit;
  PlumbingGraph cur = graph;
  std::vector<MoveApplication> log;
  kinds.erase(MoveKind::R0);
  while (log.size() < budget.max_states && clock::now() <= deadline) {
    const auto apps = enumerate_moves(cur, kinds, {true, false});
    auto it = std::find_if(apps.begin(), apps.end(), [](const MoveApplication& a) { return vertex_delta(a) < 0; });
    if (it == apps.end()) break;
    cur = apply_move(cur, *it);
    log.push_back(*it);
  }
  return {std::move(cur), std::move(log)};
}

}  // namespace plumbing
