#pragma once

// Exact label-preserving isomorphism for plumbing graphs.
//
// Canonical labeling by individualization-refinement: colour refinement on
// (vertex label, loop signs, signed neighbour colours), then a backtracking
// search over the first non-singleton cell, keeping the lexicographically
// smallest encoding. Automorphisms found between equal leaves prune sibling
// branches in the same orbit.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "plumbing/graph.hpp"

namespace plumbing {

struct CanonicalForm {
  std::string bytes;

  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;

  [[nodiscard]] std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 0xf]);
    }
    return out;
  }
};

struct CanonicalLabeling {
  CanonicalForm form;
  std::vector<VertexId> order;  // order[k] is the vertex placed at canonical position k
};

/// Vertex and edge correspondence from one graph onto an isomorphic one.
struct Isomorphism {
  std::map<VertexId, VertexId> vertices;
  std::map<EdgeId, EdgeId> edges;
};

namespace detail {

inline void put_int(std::string& out, std::int64_t v) {
  // order-preserving big-endian encoding of a signed value
  auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(v)) ^ 0x80000000u;
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((u >> shift) & 0xff));
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const PlumbingGraph& g) : graph_(g), n_(g.vertex_count()) {
    adj_.resize(n_);
    loops_.assign(n_, {0, 0});
    for (const Edge& e : g.edges()) {
      const std::size_t a = g.index_of(e.u), b = g.index_of(e.v);
      const int s = e.sign == Sign::Plus ? 1 : 0;
      if (a == b) {
        ++loops_[a][static_cast<std::size_t>(s)];
      } else {
        adj_[a].push_back({b, s});
        adj_[b].push_back({a, s});
      }
    }
  }

  CanonicalLabeling run() {
    CanonicalLabeling out;
    if (n_ == 0) {
      out.form.bytes = encode({});
      return out;
    }
    std::vector<int> colors = initial_colors();
    refine(colors);
    std::vector<std::size_t> prefix;
    search(colors, prefix);
    out.form.bytes = best_;
    for (std::size_t idx : best_order_) out.order.push_back(graph_.vertices()[idx].id);
    return out;
  }

 private:
  struct Arc {
    std::size_t to;
    int sign;
  };

  std::vector<int> initial_colors() const {
    using Key = std::tuple<VertexLabel, int, int>;
    std::vector<Key> keys(n_);
    for (std::size_t i = 0; i < n_; ++i)
      keys[i] = {graph_.vertices()[i].label, loops_[i][0], loops_[i][1]};
    return rank(keys);
  }

  template <class Key>
  static std::vector<int> rank(const std::vector<Key>& keys) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<int> colors(keys.size());
    int c = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k > 0 && keys[idx[k - 1]] < keys[idx[k]]) ++c;
      colors[idx[k]] = c;
    }
    return colors;
  }

  static int count_colors(const std::vector<int>& colors) {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  void refine(std::vector<int>& colors) const {
    int count = count_colors(colors);
    while (true) {
      std::vector<std::vector<int>> sig(n_);
      for (std::size_t v = 0; v < n_; ++v) {
        auto& s = sig[v];
        s.reserve(adj_[v].size() + 1);
        s.push_back(colors[v]);
        for (const Arc& a : adj_[v]) s.push_back(colors[a.to] * 2 + a.sign);
        std::sort(s.begin() + 1, s.end());
      }
      std::vector<int> next = rank(sig);
      const int next_count = count_colors(next);
      colors = std::move(next);
      if (next_count == count) return;
      count = next_count;
    }
  }

  std::string encode(const std::vector<std::size_t>& pos) const {
    std::string out;
    put_int(out, static_cast<std::int64_t>(n_));
    std::vector<std::size_t> by_pos(n_);
    for (std::size_t v = 0; v < n_; ++v) by_pos[pos[v]] = v;
    for (std::size_t p = 0; p < n_; ++p) {
      const VertexLabel& l = graph_.vertices()[by_pos[p]].label;
      put_int(out, l.euler);
      put_int(out, l.genus);
      put_int(out, l.boundary);
    }
    std::vector<std::array<std::int64_t, 3>> edges;
    edges.reserve(graph_.edge_count());
    for (const Edge& e : graph_.edges()) {
      std::int64_t a = static_cast<std::int64_t>(pos[graph_.index_of(e.u)]);
      std::int64_t b = static_cast<std::int64_t>(pos[graph_.index_of(e.v)]);
      if (a > b) std::swap(a, b);
      edges.push_back({a, b, to_int(e.sign)});
    }
    std::sort(edges.begin(), edges.end());
    put_int(out, static_cast<std::int64_t>(edges.size()));
    for (const auto& e : edges)
      for (std::int64_t x : e) put_int(out, x);
    return out;
  }

  // Union-find orbits of `cell` under the found automorphisms that fix every
  // vertex of `prefix`.
  std::vector<std::size_t> orbit_roots(const std::vector<std::size_t>& prefix) const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& perm : automorphisms_) {
      const bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](std::size_t v) { return perm[v] == v; });
      if (!fixes) continue;
      for (std::size_t v = 0; v < n_; ++v) parent[find(v)] = find(perm[v]);
    }
    for (std::size_t v = 0; v < n_; ++v) parent[v] = find(v);
    return parent;
  }

  void search(const std::vector<int>& colors, std::vector<std::size_t>& prefix) {
    // colours of a refined partition are 0..k-1 with every colour used
    const int k = count_colors(colors);
    if (static_cast<std::size_t>(k) == n_) {
      std::vector<std::size_t> pos(n_);
      for (std::size_t v = 0; v < n_; ++v) pos[v] = static_cast<std::size_t>(colors[v]);
      std::string code = encode(pos);
      std::vector<std::size_t> order(n_);
      for (std::size_t v = 0; v < n_; ++v) order[pos[v]] = v;
      if (best_order_.empty() || code < best_) {
        best_ = std::move(code);
        best_order_ = std::move(order);
      } else if (code == best_) {
        std::vector<std::size_t> perm(n_);
        for (std::size_t p = 0; p < n_; ++p) perm[best_order_[p]] = order[p];
        automorphisms_.push_back(std::move(perm));
      }
      return;
    }
    std::vector<int> size(static_cast<std::size_t>(k), 0);
    for (int c : colors) ++size[static_cast<std::size_t>(c)];
    int target = 0;
    while (size[static_cast<std::size_t>(target)] == 1) ++target;
    std::vector<std::size_t> cell;
    for (std::size_t v = 0; v < n_; ++v)
      if (colors[v] == target) cell.push_back(v);

    std::vector<std::size_t> tried;
    for (std::size_t w : cell) {
      if (!tried.empty()) {
        const auto roots = orbit_roots(prefix);
        if (std::any_of(tried.begin(), tried.end(), [&](std::size_t t) { return roots[t] == roots[w]; })) continue;
      }
      tried.push_back(w);
      std::vector<int> child(n_);
      for (std::size_t v = 0; v < n_; ++v) child[v] = colors[v] * 2 + (v == w ? 0 : 1);
      child = rank(child);
      refine(child);
      prefix.push_back(w);
      search(child, prefix);
      prefix.pop_back();
    }
  }

  const PlumbingGraph& graph_;
  std::size_t n_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<std::array<int, 2>> loops_;  // [minus, plus] loop counts
  std::string best_;
  std::vector<std::size_t> best_order_;
  std::vector<std::vector<std::size_t>> automorphisms_;
};

}  // namespace detail

inline CanonicalLabeling canonical_labeling(const PlumbingGraph& g) { return detail::Canonicalizer(g).run(); }

/// Throws GraphError on an invalid graph.
inline CanonicalForm canonical_form(const PlumbingGraph& g) {
  if (auto report = validate(g); !report.ok()) throw GraphError("invalid graph: " + report.describe());
  return canonical_labeling(g).form;
}

/// Same as canonical_form without the validity check; used on hot paths where
/// the graph is known valid by construction.
inline CanonicalForm canonical_form_unchecked(const PlumbingGraph& g) { return canonical_labeling(g).form; }

inline bool are_isomorphic(const PlumbingGraph& g1, const PlumbingGraph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) {
    // still reject invalid input consistently
    canonical_form(g1);
    canonical_form(g2);
    return false;
  }
  return canonical_form(g1) == canonical_form(g2);
}

/// Explicit correspondence from `from` onto `to`, or nullopt when the graphs
/// are not isomorphic.
inline std::optional<Isomorphism> find_isomorphism(const PlumbingGraph& from, const PlumbingGraph& to) {
  if (from.vertex_count() != to.vertex_count() || from.edge_count() != to.edge_count()) return std::nullopt;
  const CanonicalLabeling a = canonical_labeling(from);
  const CanonicalLabeling b = canonical_labeling(to);
  if (a.form != b.form) return std::nullopt;
  Isomorphism iso;
  std::map<VertexId, std::size_t> pos_a, pos_b;
  for (std::size_t k = 0; k < a.order.size(); ++k) {
    iso.vertices[a.order[k]] = b.order[k];
    pos_a[a.order[k]] = k;
    pos_b[b.order[k]] = k;
  }
  auto keyed = [](const PlumbingGraph& g, const std::map<VertexId, std::size_t>& pos) {
    std::vector<std::tuple<std::size_t, std::size_t, int, EdgeId>> out;
    for (const Edge& e : g.edges()) {
      std::size_t x = pos.at(e.u), y = pos.at(e.v);
      if (x > y) std::swap(x, y);
      out.emplace_back(x, y, to_int(e.sign), e.id);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ea = keyed(from, pos_a);
  const auto eb = keyed(to, pos_b);
  for (std::size_t k = 0; k < ea.size(); ++k) iso.edges[std::get<3>(ea[k])] = std::get<3>(eb[k]);
  return iso;
}

/// Reference check by trying every vertex bijection. Limited to 8 vertices.
inline bool brute_force_isomorphic(const PlumbingGraph& g1, const PlumbingGraph& g2) {
  constexpr std::size_t kLimit = 8;
  if (g1.vertex_count() > kLimit || g2.vertex_count() > kLimit)
    throw GraphError("brute_force_isomorphic supports at most 8 vertices");
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  const std::size_t n = g1.vertex_count();

  auto edge_list = [](const PlumbingGraph& g, const std::vector<std::size_t>& relabel) {
    std::vector<std::tuple<std::size_t, std::size_t, int>> out;
    for (const Edge& e : g.edges()) {
      std::size_t a = relabel[g.index_of(e.u)], b = relabel[g.index_of(e.v)];
      if (a > b) std::swap(a, b);
      out.emplace_back(a, b, to_int(e.sign));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  const auto target = edge_list(g2, identity);

  std::vector<std::size_t> perm = identity;  // perm[i] = index in g2 of g1's vertex i
  do {
    bool labels_match = true;
    for (std::size_t i = 0; i < n && labels_match; ++i)
      labels_match = g1.vertices()[i].label == g2.vertices()[perm[i]].label;
    if (labels_match && edge_list(g1, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace plumbing
