#include <gtest/gtest.h>

#include <set>

#include <plumbing/json_io.hpp>

#include "support.hpp"

using namespace plumbing;
using testing_support::make_graph;

namespace {

int sign_of(const PlumbingGraph& g, EdgeId e) { return to_int(g.edge(e).sign); }

MoveApplication fwd(MoveKind k, std::vector<VertexId> vs, std::vector<EdgeId> es, MoveParams params = {}) {
  return {k, Direction::Forward, std::move(vs), std::move(es), {}, std::move(params)};
}

std::vector<PlumbingGraph> random_graphs(std::uint64_t seed, int count, int max_vertices) {
  plumbing::Rng rng(seed);
  GenParams p = testing_support::small_params(max_vertices);
  std::vector<PlumbingGraph> out;
  for (int i = 0; i < count; ++i) {
    PlumbingGraph g = random_graph(p, rng);
    // a few scramble steps put R1/R2/R3/R4/R5/R8 sites into the sample
    p.n_max = 4;
    out.push_back(scramble(g, p, rng).first);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// R0

TEST(R0, FlipsLinksButNotLoopsForOrientableGenus) {
  const PlumbingGraph g =
      make_graph({{0, 1, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {{0, 1, 1}, {0, 2, -1}, {0, 3, 1}, {0, 0, 1}});
  const PlumbingGraph h = apply_r0(g, 0);
  EXPECT_EQ(sign_of(h, 0), -1);
  EXPECT_EQ(sign_of(h, 1), 1);
  EXPECT_EQ(sign_of(h, 2), -1);
  EXPECT_EQ(sign_of(h, 3), 1);
  EXPECT_EQ(h.vertices(), g.vertices());
}

TEST(R0, FlipsLoopsForNegativeGenus) {
  const PlumbingGraph h = apply_r0(make_graph({{0, -1, 0}}, {{0, 0, 1}}), 0);
  EXPECT_EQ(sign_of(h, 0), -1);
}

TEST(R0, IsolatedVertexUnchanged) {
  const PlumbingGraph g = make_graph({{4, 2, 0}});
  const PlumbingGraph h = apply_r0(g, 0);
  EXPECT_EQ(h.vertices(), g.vertices());
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_THROW((void)apply_r0(g, 3), MoveError);
}

TEST(R0, DispatchMatchesDirectCall) {
  const PlumbingGraph g = make_graph({{0, 1, 0}, {1, 0, 0}}, {{0, 1, 1}, {0, 0, -1}});
  const PlumbingGraph a = apply_move(g, fwd(MoveKind::R0, {0}, {}));
  const PlumbingGraph b = apply_r0(g, 0);
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_EQ(a.vertices(), b.vertices());
}

// ---------------------------------------------------------------------------
// R1

TEST(R1, ChainSign) {
  // a(2) -+- x(+1) -+- b(3)
  const PlumbingGraph g = make_graph({{2, 0, 0}, {1, 0, 0}, {3, 0, 0}}, {{0, 1, 1}, {1, 2, 1}});
  const PlumbingGraph h = apply_r1(g, fwd(MoveKind::R1, {1, 0, 2}, {0, 1}, {{"rho", 1}}));
  ASSERT_EQ(h.vertex_count(), 2u);
  ASSERT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(to_int(h.edges()[0].sign), -1);
  EXPECT_EQ(h.label(0), (VertexLabel{1, 0, 0}));
  EXPECT_EQ(h.label(2), (VertexLabel{2, 0, 0}));
}

TEST(R1, ChainWithNegativeUnit) {
  const PlumbingGraph g = make_graph({{2, 0, 0}, {-1, 0, 0}, {3, 0, 0}}, {{0, 1, 1}, {1, 2, -1}});
  const PlumbingGraph h = apply_r1(g, fwd(MoveKind::R1, {1, 0, 2}, {0, 1}, {{"rho", -1}}));
  EXPECT_EQ(to_int(h.edges()[0].sign), -1);  // -(-1)(+1)(-1)
  EXPECT_EQ(h.label(0), (VertexLabel{3, 0, 0}));
  EXPECT_EQ(h.label(2), (VertexLabel{4, 0, 0}));
}

TEST(R1, LeafAndParallelPair) {
  const PlumbingGraph leaf = make_graph({{5, 1, 0}, {-1, 0, 0}}, {{0, 1, -1}});
  const PlumbingGraph a = apply_r1(leaf, fwd(MoveKind::R1, {1, 0}, {0}, {{"rho", -1}}));
  EXPECT_EQ(a.vertex_count(), 1u);
  EXPECT_EQ(a.label(0), (VertexLabel{6, 1, 0}));

  const PlumbingGraph pair = make_graph({{5, 0, 0}, {1, 0, 0}}, {{0, 1, 1}, {0, 1, -1}});
  const PlumbingGraph b = apply_r1(pair, fwd(MoveKind::R1, {1, 0}, {0, 1}, {{"rho", 1}}));
  ASSERT_EQ(b.edge_count(), 1u);
  EXPECT_TRUE(b.edges()[0].is_loop());
  EXPECT_EQ(to_int(b.edges()[0].sign), 1);  // -(+1)(+1)(-1)
  EXPECT_EQ(b.label(0), (VertexLabel{3, 0, 0}));
}

TEST(R1, BoundaryNeighbourKeepsZeroEuler) {
  const PlumbingGraph g = make_graph({{0, 0, 1}, {1, 0, 0}}, {{0, 1, 1}});
  const PlumbingGraph h = apply_r1(g, fwd(MoveKind::R1, {1, 0}, {0}, {{"rho", 1}}));
  EXPECT_EQ(h.label(0), (VertexLabel{0, 0, 1}));
  EXPECT_TRUE(validate(h).ok());
}

TEST(R1, GenusOneIsAPatternMismatch) {
  const PlumbingGraph g = make_graph({{2, 0, 0}, {1, 1, 0}}, {{0, 1, 1}});
  try {
    (void)apply_r1(g, fwd(MoveKind::R1, {1, 0}, {0}, {{"rho", 1}}));
    FAIL() << "expected a mismatch";
  } catch (const MoveError& e) {
    EXPECT_NE(std::string(e.what()).find("pattern mismatch"), std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// R2

TEST(R2, DeltaEntersTheCentreLabel) {
  const PlumbingGraph same = make_graph({{1, 0, 0}, {2, 0, 0}, {2, 0, 0}}, {{0, 1, 1}, {0, 2, -1}});
  const PlumbingGraph a = apply_r2(same, fwd(MoveKind::R2, {0, 1, 2}, {0, 1}, {{"delta1", 1}, {"delta2", 1}}));
  EXPECT_EQ(a.vertex_count(), 1u);
  EXPECT_EQ(a.label(0), (VertexLabel{0, -1, 0}));

  const PlumbingGraph mixed = make_graph({{1, 0, 0}, {2, 0, 0}, {-2, 0, 0}}, {{0, 1, 1}, {0, 2, 1}});
  const PlumbingGraph b = apply_r2(mixed, fwd(MoveKind::R2, {0, 1, 2}, {0, 1}, {{"delta1", 1}, {"delta2", -1}}));
  EXPECT_EQ(b.label(0), (VertexLabel{1, -1, 0}));
}

TEST(R2, FullInstanceWithRemainingNeighbours) {
  // c(3,1,0) carries two RP^2 leaves and a neighbour q; genus 1 # -1 = -3
  const PlumbingGraph g = make_graph({{3, 1, 0}, {-2, 0, 0}, {-2, 0, 0}, {7, 0, 0}}, {{0, 1, 1}, {0, 2, 1}, {0, 3, -1}});
  const PlumbingGraph h = apply_r2(g, fwd(MoveKind::R2, {0, 1, 2}, {0, 1}, {{"delta1", -1}, {"delta2", -1}}));
  EXPECT_EQ(h.label(0), (VertexLabel{4, -3, 0}));
  EXPECT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(sign_of(h, 2), -1);
}

TEST(R2, MismatchedLeaf) {
  const PlumbingGraph g = make_graph({{1, 0, 0}, {2, 0, 0}, {2, 1, 0}}, {{0, 1, 1}, {0, 2, 1}});
  EXPECT_THROW((void)apply_r2(g, fwd(MoveKind::R2, {0, 1, 2}, {0, 1}, {{"delta1", 1}, {"delta2", 1}})), MoveError);
}

// ---------------------------------------------------------------------------
// R3

TEST(R3, TwistAndLoopOnFiveVertexInstance) {
  // p(1) -+- keep(2,1,0) -eps- x(0,0,0) -epsbar- other(3,0,0) -+- q(4), loop + on other
  const PlumbingGraph g = make_graph({{1, 0, 0}, {2, 1, 0}, {0, 0, 0}, {3, 0, 0}, {4, 0, 0}},
                                     {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {3, 3, 1}});
  const PlumbingGraph h = apply_r3(g, fwd(MoveKind::R3, {2, 1, 3}, {1, 2}));
  EXPECT_EQ(g.vertex_count(), 5u);
  EXPECT_EQ(h.vertex_count(), 3u);
  EXPECT_EQ(h.label(1), (VertexLabel{5, 1, 0}));
  EXPECT_EQ(sign_of(h, 3), -1);  // -eps epsbar eps_i = -(+1)(+1)(+1)
  EXPECT_EQ(h.edge(3).u, 1u);
  EXPECT_EQ(h.edge(3).v, 4u);
  EXPECT_EQ(sign_of(h, 4), 1);  // loop unchanged
  EXPECT_TRUE(h.edge(4).is_loop());
  EXPECT_EQ(sign_of(h, 0), 1);
}

TEST(R3, OppositeSignsKeepEdges) {
  const PlumbingGraph g = make_graph({{1, -1, 0}, {0, 0, 0}, {0, 2, 1}, {4, 0, 0}}, {{0, 1, 1}, {1, 2, -1}, {2, 3, -1}});
  const PlumbingGraph h = apply_r3(g, fwd(MoveKind::R3, {1, 0, 2}, {0, 1}));
  EXPECT_EQ(sign_of(h, 2), -1);
  // (1,-1,0) merged with (0,2,1): genus -1 # 2 = -5, boundary 1 forces e = 0
  EXPECT_EQ(h.label(0), (VertexLabel{0, -5, 1}));
}

TEST(R3, RequiresDegreeTwoZeroVertex) {
  const PlumbingGraph g = make_graph({{1, 0, 0}, {0, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}});
  EXPECT_THROW((void)apply_r3(g, fwd(MoveKind::R3, {1, 0, 2}, {0, 1})), MoveError);
}

// ---------------------------------------------------------------------------
// R4, R5, R8

TEST(R4, UnorientedHandle) {
  const PlumbingGraph g = make_graph({{1, 1, 0}, {0, 0, 0}, {5, 0, 0}}, {{0, 1, -1}, {0, 1, -1}, {0, 2, 1}});
  const PlumbingGraph h = apply_r4(g, fwd(MoveKind::R4, {0, 1}, {0, 1}));
  EXPECT_EQ(h.vertex_count(), 2u);
  EXPECT_EQ(h.label(0), (VertexLabel{1, -4, 0}));  // 1 # -2
  EXPECT_TRUE(validate(h).ok());
}

TEST(R4, WrongLabelsOrSigns) {
  const PlumbingGraph labels = make_graph({{1, 1, 0}, {1, 0, 0}}, {{0, 1, 1}, {0, 1, 1}});
  EXPECT_THROW((void)apply_r4(labels, fwd(MoveKind::R4, {0, 1}, {0, 1})), MoveError);
  const PlumbingGraph signs = make_graph({{1, 1, 0}, {0, 0, 0}}, {{0, 1, 1}, {0, 1, -1}});
  EXPECT_THROW((void)apply_r4(signs, fwd(MoveKind::R4, {0, 1}, {0, 1})), MoveError);
}

TEST(R5, OrientedHandle) {
  const PlumbingGraph g = make_graph({{2, -1, 0}, {0, 0, 0}}, {{0, 1, 1}, {0, 1, -1}});
  const PlumbingGraph h = apply_r5(g, fwd(MoveKind::R5, {0, 1}, {0, 1}));
  EXPECT_EQ(h.vertex_count(), 1u);
  EXPECT_EQ(h.label(0), (VertexLabel{2, -3, 0}));  // -1 # 1
  EXPECT_TRUE(validate(h).ok());
  const PlumbingGraph same = make_graph({{2, -1, 0}, {0, 0, 0}}, {{0, 1, 1}, {0, 1, 1}});
  EXPECT_THROW((void)apply_r5(same, fwd(MoveKind::R5, {0, 1}, {0, 1})), MoveError);
}

TEST(R8, AnnulusAbsorption) {
  const PlumbingGraph g = make_graph({{3, 2, 0}, {0, 0, 1}, {1, 0, 0}}, {{0, 1, -1}, {0, 2, 1}});
  const PlumbingGraph h = apply_r8(g, fwd(MoveKind::R8, {0, 1}, {0}));
  EXPECT_EQ(h.vertex_count(), 2u);
  EXPECT_EQ(h.label(0), (VertexLabel{0, 2, 1}));
  EXPECT_TRUE(validate(h).ok());
  const PlumbingGraph wrong = make_graph({{3, 2, 0}, {0, 0, 2}}, {{0, 1, -1}});
  EXPECT_THROW((void)apply_r8(wrong, fwd(MoveKind::R8, {0, 1}, {0})), MoveError);
}

TEST(Dispatch, DirectionsWithoutInverse) {
  const PlumbingGraph g = make_graph({{0, 0, 0}});
  for (MoveKind k : {MoveKind::R0, MoveKind::R2, MoveKind::R4, MoveKind::R5, MoveKind::R8})
    EXPECT_THROW((void)apply_move(g, {k, Direction::Inverse, {0}, {}, {}, {}}), MoveError);
}

// ---------------------------------------------------------------------------
// Enumeration

TEST(Enumerate, SingleZeroVertex) {
  const PlumbingGraph g = make_graph({{0, 0, 0}});
  const auto apps = enumerate_moves(g, MoveKindSet::all());
  // R0; four leaf blow-ups (rho, sign); one 0-chain insertion moving nothing
  ASSERT_EQ(apps.size(), 6u);
  EXPECT_EQ(apps[0].kind, MoveKind::R0);
  for (std::size_t i = 1; i <= 4; ++i) {
    EXPECT_EQ(apps[i].kind, MoveKind::R1);
    EXPECT_EQ(apps[i].dir, Direction::Inverse);
  }
  EXPECT_EQ(apps[5].kind, MoveKind::R3);
  EXPECT_EQ(apps[5].dir, Direction::Inverse);
  EXPECT_TRUE(apps[5].edges.empty());
}

TEST(Enumerate, EmptyKindSet) {
  EXPECT_TRUE(enumerate_moves(make_graph({{0, 0, 0}}), MoveKindSet{}).empty());
}

TEST(Enumerate, FindsEveryForwardKind) {
  // centre with two RP^2 leaves, an annulus leaf, a handle, a blow-down leaf
  // and a 0-chain to w
  const PlumbingGraph g = make_graph({{0, 1, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {3, 0, 0}},
                                     {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {0, 4, 1}, {0, 5, 1}, {0, 6, 1}, {6, 7, 1}});
  const auto apps = enumerate_moves(g, MoveKindSet::all(), {true, false});
  std::set<MoveKind> kinds;
  for (const auto& a : apps) kinds.insert(a.kind);
  EXPECT_EQ(kinds, (std::set<MoveKind>{MoveKind::R0, MoveKind::R1, MoveKind::R2, MoveKind::R3, MoveKind::R4, MoveKind::R8}));
}

TEST(Enumerate, DeterministicSortedAndDuplicateFree) {
  for (const PlumbingGraph& g : random_graphs(41, 150, 8)) {
    const auto a = enumerate_moves(g, MoveKindSet::all());
    const auto b = enumerate_moves(g, MoveKindSet::all());
    ASSERT_EQ(a, b);
    ASSERT_TRUE(std::is_sorted(a.begin(), a.end()));
    ASSERT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  }
}

TEST(Enumerate, LocalEnumerationIsTheTouchingSubset) {
  for (const PlumbingGraph& g : random_graphs(43, 150, 8)) {
    const auto all = enumerate_moves(g, MoveKindSet::all());
    for (const Vertex& v : g.vertices()) {
      std::vector<MoveApplication> expected;
      for (const auto& a : all)
        if (touches(g, a, v.id)) expected.push_back(a);
      ASSERT_EQ(enumerate_moves_at(g, v.id, MoveKindSet::all()), expected);
    }
  }
}

TEST(Enumerate, EveryApplicationSucceedsAndStaysValid) {
  for (const PlumbingGraph& g : random_graphs(47, 200, 8)) {
    ASSERT_EQ(component_count(g), 1u);
    for (const auto& app : enumerate_moves(g, MoveKindSet::all())) {
      PlumbingGraph h;
      ASSERT_NO_THROW(h = apply_move(g, app)) << move_to_json(app).dump();
      const ValidityReport r = validate(h);
      ASSERT_TRUE(r.ok()) << r.describe() << " after " << move_to_json(app).dump();
      ASSERT_EQ(component_count(h), 1u);
      ASSERT_EQ(static_cast<long>(h.vertex_count()) - static_cast<long>(g.vertex_count()), vertex_delta(app));
    }
  }
}

// ---------------------------------------------------------------------------
// Algebra

TEST(Algebra, R0IsAnInvolution) {
  for (const PlumbingGraph& g : random_graphs(53, 100, 10))
    for (const Vertex& v : g.vertices()) {
      const PlumbingGraph twice = apply_r0(apply_r0(g, v.id), v.id);
      ASSERT_EQ(twice.edges(), g.edges());
    }
}

TEST(Algebra, ForwardThenInverseIsIdentity) {
  std::size_t checked = 0;
  for (const PlumbingGraph& g : random_graphs(59, 150, 7)) {
    for (const auto& app : enumerate_moves(g, MoveKindSet::invertible())) {
      const PlumbingGraph h = apply_move(g, app);
      const MoveApplication back = inverse_of(g, app, h);
      const PlumbingGraph k = apply_move(h, back);
      ASSERT_TRUE(are_isomorphic(g, k)) << move_to_json(app).dump();
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Algebra, NoInverseForAbsorptionOnlyKinds) {
  const PlumbingGraph g = make_graph({{1, 1, 0}, {0, 0, 0}}, {{0, 1, -1}, {0, 1, -1}});
  const auto app = fwd(MoveKind::R4, {0, 1}, {0, 1});
  EXPECT_THROW((void)inverse_of(g, app, apply_move(g, app)), MoveError);
}

TEST(Algebra, StaleApplicationFails) {
  const PlumbingGraph g = make_graph({{2, 0, 0}, {1, 0, 0}, {3, 0, 0}}, {{0, 1, 1}, {1, 2, 1}});
  const auto app = fwd(MoveKind::R1, {1, 0, 2}, {0, 1}, {{"rho", 1}});
  const PlumbingGraph h = apply_move(g, app);
  EXPECT_THROW((void)apply_move(h, app), MoveError);
}

TEST(Algebra, InsertionParametersAreChecked) {
  const PlumbingGraph g = make_graph({{3, 1, 0}});
  MoveApplication app{MoveKind::R3, Direction::Inverse, {0}, {}, {},
                      {{"e1", 1}, {"g1", 1}, {"r1", 0}, {"e2", 2}, {"g2", 0}, {"r2", 0}, {"eps", 1}, {"epsbar", 1}}};
  EXPECT_NO_THROW((void)apply_move(g, app));
  app.params["g2"] = 1;
  EXPECT_THROW((void)apply_move(g, app), MoveError);
}

TEST(MoveJson, RoundTrip) {
  for (const PlumbingGraph& g : random_graphs(61, 40, 6))
    for (const auto& app : enumerate_moves(g, MoveKindSet::all())) EXPECT_EQ(move_from_json(json::parse(move_to_json(app).dump())), app);
}
