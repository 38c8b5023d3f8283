#pragma once

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <tuple>
#include <vector>

#include <plumbing/datagen.hpp>
#include <plumbing/graph.hpp>
#include <plumbing/isomorphism.hpp>
#include <plumbing/moves.hpp>

namespace testing_support {

using namespace plumbing;

inline PlumbingGraph make_graph(std::initializer_list<VertexLabel> nodes,
                                std::initializer_list<std::tuple<VertexId, VertexId, int>> edges = {}) {
  PlumbingGraph g;
  for (const VertexLabel& l : nodes) g.add_vertex(l);
  for (const auto& [u, v, s] : edges) g.add_edge(u, v, sign_from_int(s));
  return g;
}

/// Same graph with vertex ids permuted and edges inserted in a shuffled order.
inline PlumbingGraph relabel(const PlumbingGraph& g, Rng& rng) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<const Vertex*> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[perm[i]] = &g.vertices()[i];
  PlumbingGraph out;
  for (const Vertex* v : slots) out.add_vertex(v->label);
  std::vector<Edge> edges = g.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  for (const Edge& e : edges) {
    const auto a = static_cast<VertexId>(perm[g.index_of(e.u)]);
    const auto b = static_cast<VertexId>(perm[g.index_of(e.v)]);
    if (uniform(rng, 0, 1) == 0)
      out.add_edge(a, b, e.sign);
    else
      out.add_edge(b, a, e.sign);
  }
  return out;
}

inline GenParams small_params(int max_vertices) {
  GenParams p;
  p.vertex_count = {1, max_vertices};
  p.euler = {-3, 3};
  p.genus = {-2, 2};
  p.boundary = {0, 1};
  return p;
}

/// Surface Euler characteristic: orientable genus g has 2-2g, a
/// non-orientable surface with k cross-caps has 2-k.
inline int surface_chi(int g) { return g >= 0 ? 2 - 2 * g : 2 + g; }

/// Genus of the connected sum computed through Euler characteristics.
inline int connected_sum_genus(int g1, int g2) {
  const int chi = surface_chi(g1) + surface_chi(g2) - 2;
  const bool orientable = g1 >= 0 && g2 >= 0;
  return orientable ? (2 - chi) / 2 : -(2 - chi);
}

}  // namespace testing_support
