#pragma once

// Random plumbing graphs and labelled pair datasets (EquivPair, InEquivPair,
// TweakPair), written as JSON Lines.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "plumbing/graph.hpp"
#include "plumbing/json_io.hpp"
#include "plumbing/moves.hpp"

namespace plumbing {

using Rng = std::mt19937_64;

struct IntRange {
  int lo;
  int hi;

  [[nodiscard]] bool valid() const noexcept { return lo <= hi; }
};

struct GenParams {
  IntRange vertex_count{1, 25};
  IntRange euler{-20, 20};
  IntRange genus{-4, 4};
  IntRange boundary{0, 2};
  int n_max = 60;
  std::uint64_t master_seed = 0;
  MoveKindSet kinds = MoveKindSet::all();
  DirectionSet directions{};

  [[nodiscard]] bool valid() const noexcept {
    return vertex_count.valid() && vertex_count.lo >= 1 && euler.valid() && genus.valid() && boundary.valid() &&
           boundary.lo >= 0 && n_max >= 0;
  }
};

enum class PairSource { Equiv, Inequiv, Tweak };

inline const char* to_string(PairSource s) noexcept {
  switch (s) {
    case PairSource::Equiv: return "equiv";
    case PairSource::Inequiv: return "inequiv";
    case PairSource::Tweak: return "tweak";
  }
  return "?";
}

struct PairRecord {
  PlumbingGraph graph1;
  PlumbingGraph graph2;
  int label = 0;
  PairSource source = PairSource::Equiv;
  std::uint64_t seed = 0;
  // pre-scramble graphs and the moves that turned them into graph1 / graph2
  std::optional<PlumbingGraph> base1, base2;
  std::optional<std::vector<MoveApplication>> moves1, moves2;
  std::optional<int> tweak_delta;
  std::optional<std::uint64_t> seed1, seed2;  // inequiv: per-graph streams
};

/// splitmix64 finaliser; derives independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Uniform labels (e forced to 0 where r>0), a uniform random spanning tree
/// from a Pruefer sequence, then k extra edges with k uniform in [0, floor(n/2)]
/// and uniform endpoints (loops and parallel edges allowed).
inline PlumbingGraph random_graph(const GenParams& p, Rng& rng) {
  PlumbingGraph g;
  const int n = uniform(rng, p.vertex_count.lo, p.vertex_count.hi);
  for (int i = 0; i < n; ++i) {
    VertexLabel l{uniform(rng, p.euler.lo, p.euler.hi), uniform(rng, p.genus.lo, p.genus.hi),
                  uniform(rng, p.boundary.lo, p.boundary.hi)};
    g.add_vertex(l.normalized());
  }
  auto random_sign = [&] { return uniform(rng, 0, 1) == 0 ? Sign::Minus : Sign::Plus; };
  if (n >= 2) {
    std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
    for (int& x : pruefer) x = uniform(rng, 0, n - 1);
    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (int x : pruefer) ++deg[static_cast<std::size_t>(x)];
    for (int x : pruefer) {
      int leaf = 0;
      while (deg[static_cast<std::size_t>(leaf)] != 1) ++leaf;
      g.add_edge(static_cast<VertexId>(leaf), static_cast<VertexId>(x), random_sign());
      --deg[static_cast<std::size_t>(leaf)];
      --deg[static_cast<std::size_t>(x)];
    }
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v)
      if (deg[static_cast<std::size_t>(v)] == 1) (a < 0 ? a : b) = v;
    g.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b), random_sign());
  }
  const int extra = uniform(rng, 0, n / 2);
  for (int i = 0; i < extra; ++i) {
    const auto u = static_cast<VertexId>(uniform(rng, 0, n - 1));
    const auto v = static_cast<VertexId>(uniform(rng, 0, n - 1));
    g.add_edge(u, v, random_sign());
  }
  return g;
}

/// One scramble step: pick a vertex, then a (kind, direction) class among
/// those with applications touching it, then an application. Returns nullopt
/// (a no-op step) when nothing applies there.
inline std::optional<MoveApplication> random_move_at_random_vertex(const PlumbingGraph& g, const GenParams& p, Rng& rng) {
  const auto& vs = g.vertices();
  const VertexId v = vs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(vs.size()) - 1))].id;
  const auto apps = enumerate_moves_at(g, v, p.kinds, p.directions);
  if (apps.empty()) return std::nullopt;
  // apps are sorted, so each (kind, dir) class is a contiguous run
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 1; i < apps.size(); ++i)
    if (apps[i].kind != apps[i - 1].kind || apps[i].dir != apps[i - 1].dir) starts.push_back(i);
  const auto c = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(starts.size()) - 1));
  const std::size_t lo = starts[c];
  const std::size_t hi = c + 1 < starts.size() ? starts[c + 1] : apps.size();
  return apps[lo + static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(hi - lo) - 1))];
}

/// Applies `p.n_max` scramble steps; returns the final graph and the log of
/// moves actually applied.
inline std::pair<PlumbingGraph, std::vector<MoveApplication>> scramble(const PlumbingGraph& g, const GenParams& p, Rng& rng) {
  PlumbingGraph cur = g;
  std::vector<MoveApplication> log;
  for (int step = 0; step < p.n_max; ++step) {
    auto app = random_move_at_random_vertex(cur, p, rng);
    if (!app) continue;
    cur = apply_move(cur, *app);
    log.push_back(std::move(*app));
  }
  return {std::move(cur), std::move(log)};
}

inline PairRecord equiv_pair(const GenParams& p, std::uint64_t seed) {
  Rng rng(seed);
  PlumbingGraph base = random_graph(p, rng);
  auto [g1, m1] = scramble(base, p, rng);
  auto [g2, m2] = scramble(base, p, rng);
  PairRecord rec{std::move(g1), std::move(g2), 1, PairSource::Equiv, seed, base, base, std::move(m1), std::move(m2), {}, {}, {}};
  return rec;
}

inline PairRecord inequiv_pair(const GenParams& p, std::uint64_t seed) {
  const std::uint64_t s1 = mix_seed(seed, 1), s2 = mix_seed(seed, 2);
  Rng r1(s1), r2(s2);
  PlumbingGraph b1 = random_graph(p, r1);
  PlumbingGraph b2 = random_graph(p, r2);
  auto [g1, m1] = scramble(b1, p, r1);
  auto [g2, m2] = scramble(b2, p, r2);
  PairRecord rec{std::move(g1), std::move(g2), 0, PairSource::Inequiv, seed, {}, {}, {}, {}, {}, s1, s2};
  return rec;
}

/// The copy gets one r=0 vertex's Euler number shifted by a non-zero amount
/// in [-3,3] before scrambling. Bases without an r=0 vertex are redrawn.
inline PairRecord tweak_pair(const GenParams& p, std::uint64_t seed) {
  Rng rng(seed);
  PlumbingGraph base;
  std::vector<VertexId> candidates;
  for (int attempt = 0; candidates.empty(); ++attempt) {
    if (attempt == 1000) throw std::invalid_argument("tweak_pair: parameters never produce a vertex with r=0");
    base = random_graph(p, rng);
    for (const Vertex& v : base.vertices())
      if (v.label.boundary == 0) candidates.push_back(v.id);
  }
  const VertexId target = candidates[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(candidates.size()) - 1))];
  int delta = uniform(rng, -3, 2);
  if (delta >= 0) ++delta;  // uniform on {-3,-2,-1,1,2,3}
  PlumbingGraph copy = base;
  VertexLabel l = copy.label(target);
  l.euler += delta;
  copy.set_label(target, l);
  auto [g1, m1] = scramble(base, p, rng);
  auto [g2, m2] = scramble(copy, p, rng);
  PairRecord rec{std::move(g1), std::move(g2), 0, PairSource::Tweak, seed, base, copy, std::move(m1), std::move(m2), delta, {}, {}};
  return rec;
}

inline json record_to_json(const PairRecord& r) {
  json j;
  j["graph1"] = graph_to_json(r.graph1);
  j["graph2"] = graph_to_json(r.graph2);
  j["label"] = r.label;
  j["source"] = to_string(r.source);
  j["seed"] = r.seed;
  if (r.base1) j["base1"] = graph_to_json(*r.base1);
  if (r.moves1) j["moves1"] = moves_to_json(*r.moves1);
  if (r.base2) j["base2"] = graph_to_json(*r.base2);
  if (r.moves2) j["moves2"] = moves_to_json(*r.moves2);
  if (r.tweak_delta) j["tweak_delta"] = *r.tweak_delta;
  if (r.seed1) j["seed1"] = *r.seed1;
  if (r.seed2) j["seed2"] = *r.seed2;
  return j;
}

inline PairRecord record_from_json(const json& j) {
  PairRecord r;
  try {
    r.graph1 = graph_from_json(j.at("graph1"));
    r.graph2 = graph_from_json(j.at("graph2"));
    r.label = j.at("label").get<int>();
    const std::string src = j.at("source").get<std::string>();
    if (src == "equiv")
      r.source = PairSource::Equiv;
    else if (src == "inequiv")
      r.source = PairSource::Inequiv;
    else if (src == "tweak")
      r.source = PairSource::Tweak;
    else
      throw FormatError("unknown source '" + src + "'");
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("base1")) r.base1 = graph_from_json(j["base1"]);
    if (j.contains("moves1")) r.moves1 = moves_from_json(j["moves1"]);
    if (j.contains("base2")) r.base2 = graph_from_json(j["base2"]);
    if (j.contains("moves2")) r.moves2 = moves_from_json(j["moves2"]);
    if (j.contains("tweak_delta")) r.tweak_delta = j["tweak_delta"].get<int>();
    if (j.contains("seed1")) r.seed1 = j["seed1"].get<std::uint64_t>();
    if (j.contains("seed2")) r.seed2 = j["seed2"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
  return r;
}

struct DatasetCounts {
  std::size_t equiv = 0;
  std::size_t inequiv = 0;
  std::size_t tweak = 0;

  [[nodiscard]] std::size_t total() const noexcept { return equiv + inequiv + tweak; }
};

struct DatasetSummary {
  DatasetCounts counts;
  std::size_t label0 = 0;
  std::size_t label1 = 0;
  double seconds = 0.0;
};

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("PLUMB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Generates the record with the given stream index (0-based, before shuffle).
inline PairRecord generate_record(const DatasetCounts& counts, const GenParams& params, std::size_t index) {
  const std::uint64_t seed = mix_seed(params.master_seed, index);
  if (index < counts.equiv) return equiv_pair(params, seed);
  if (index < counts.equiv + counts.inequiv) return inequiv_pair(params, seed);
  return tweak_pair(params, seed);
}

/// Streams JSON Lines to `out`. Record i of the file is generated from stream
/// index order[i], where `order` is a seeded shuffle of 0..total-1; the
/// first counts.equiv indices are equiv pairs, then inequiv, then tweak.
inline DatasetSummary build_dataset(const DatasetCounts& counts, const GenParams& params, std::ostream& out,
                                    unsigned threads = default_thread_count()) {
  if (!params.valid()) throw std::invalid_argument("invalid generation parameters");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t total = counts.total();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(mix_seed(params.master_seed, ~std::uint64_t{0}));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  DatasetSummary summary;
  summary.counts = counts;
  threads = std::max(1u, threads);
  const std::size_t chunk = std::max<std::size_t>(64, threads * 16);
  std::vector<std::string> lines;
  for (std::size_t begin = 0; begin < total; begin += chunk) {
    const std::size_t end = std::min(total, begin + chunk);
    lines.assign(end - begin, {});
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned t) {
      try {
        for (std::size_t i = begin + t; i < end; i += threads) {
          const PairRecord rec = generate_record(counts, params, order[i]);
          lines[i - begin] = record_to_json(rec).dump();
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    if (failure) std::rethrow_exception(failure);
    for (const std::string& line : lines) {
      out << line << '\n';
      if (!out) throw std::ios_base::failure("write failed");
    }
  }
  out.flush();
  if (!out) throw std::ios_base::failure("write failed");
  summary.label1 = counts.equiv;
  summary.label0 = counts.inequiv + counts.tweak;
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace plumbing
