#pragma once

// Command-line front end: gen, check, verify, apply.
//
// Exit codes: 0 success, 1 negative verdict or inapplicable move,
// 2 usage or malformed input, 3 I/O failure. JSON goes to `out`,
// diagnostics to `err`.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plumbing/datagen.hpp"
#include "plumbing/json_io.hpp"
#include "plumbing/oracle.hpp"

namespace plumbing::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kIo = 3 };

namespace detail {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline PlumbingGraph require_valid(const json& j) {
  PlumbingGraph g = graph_from_json(j);
  if (auto report = validate(g); !report.ok()) throw FormatError("invalid graph: " + report.describe());
  return g;
}

inline json verdict_to_json(const Verdict& v) {
  if (const auto* eq = std::get_if<Equivalent>(&v))
    return {{"verdict", "equivalent"}, {"states_explored", eq->states_explored}, {"certificate", certificate_to_json(eq->certificate)}};
  const auto& unk = std::get<Unknown>(v);
  return {{"verdict", "unknown"}, {"states_explored", unk.states_explored}, {"reason", unk.reason}};
}

}  // namespace detail

struct GenOptions {
  std::string out;
  std::size_t count = 0;
  double equiv_frac = 0.5;
  double tweak_frac = 0.25;
  std::uint64_t seed = 0;
  int nmax = 60;
  int max_vertices = 25;
};

/// Splits `count` by the two fractions; the inequiv share takes the rest.
inline DatasetCounts split_counts(std::size_t count, double equiv_frac, double tweak_frac) {
  DatasetCounts c;
  c.equiv = static_cast<std::size_t>(std::llround(static_cast<double>(count) * equiv_frac));
  c.tweak = static_cast<std::size_t>(std::llround(static_cast<double>(count) * tweak_frac));
  c.equiv = std::min(c.equiv, count);
  c.tweak = std::min(c.tweak, count - c.equiv);
  c.inequiv = count - c.equiv - c.tweak;
  return c;
}

inline int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  const bool fracs_ok = o.equiv_frac >= 0 && o.tweak_frac >= 0 && o.equiv_frac + o.tweak_frac <= 1.0 + 1e-9;
  if (!fracs_ok) {
    err << "gen: --equiv-frac and --tweak-frac must be non-negative and sum to at most 1\n";
    return kUsage;
  }
  if (o.nmax < 0 || o.max_vertices < 1) {
    err << "gen: --nmax must be >= 0 and --max-vertices >= 1\n";
    return kUsage;
  }
  GenParams params;
  params.n_max = o.nmax;
  params.vertex_count.hi = o.max_vertices;
  params.master_seed = o.seed;
  const DatasetCounts counts = split_counts(o.count, o.equiv_frac, o.tweak_frac);

  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "gen: cannot open " << o.out << " for writing\n";
    return kIo;
  }
  DatasetSummary summary;
  try {
    summary = build_dataset(counts, params, file);
  } catch (const std::ios_base::failure& e) {
    err << "gen: " << e.what() << '\n';
    return kIo;
  }
  out << json{{"count", counts.total()},
              {"equiv", counts.equiv},
              {"inequiv", counts.inequiv},
              {"tweak", counts.tweak},
              {"label0", summary.label0},
              {"label1", summary.label1},
              {"seed", o.seed},
              {"seconds", summary.seconds}}
             .dump()
      << '\n';
  return kOk;
}

struct CheckOptions {
  std::string pair;
  std::size_t max_states = 100000;
  std::size_t max_depth = 6;
  double time_limit = 60.0;
};

inline int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  PlumbingGraph g1, g2;
  try {
    const json j = detail::read_json_file(o.pair);
    if (j.is_array() && j.size() == 2) {
      g1 = detail::require_valid(j[0]);
      g2 = detail::require_valid(j[1]);
    } else if (j.is_object() && j.contains("graph1") && j.contains("graph2")) {
      g1 = detail::require_valid(j["graph1"]);
      g2 = detail::require_valid(j["graph2"]);
    } else {
      throw FormatError("pair file must hold [graph, graph] or {\"graph1\":..., \"graph2\":...}");
    }
  } catch (const detail::IoError& e) {
    err << "check: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "check: " << e.what() << '\n';
    return kUsage;
  }
  if (o.max_states == 0 || o.max_depth == 0 || !(o.time_limit > 0)) {
    err << "check: budget values must be positive\n";
    return kUsage;
  }
  SearchBudget budget{o.max_states, o.max_depth,
                      std::chrono::milliseconds(static_cast<long long>(o.time_limit * 1000.0))};
  const Verdict v = bounded_search(g1, g2, budget);
  out << detail::verdict_to_json(v).dump() << '\n';
  return std::holds_alternative<Equivalent>(v) ? kOk : kNegative;
}

inline int cmd_verify(const std::string& cert_path, std::ostream& out, std::ostream& err) {
  Certificate cert;
  try {
    cert = certificate_from_json(detail::read_json_file(cert_path));
  } catch (const detail::IoError& e) {
    err << "verify: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "verify: malformed certificate: " << e.what() << '\n';
    return kUsage;
  }
  const ReplayResult res = check_certificate(cert);
  json j{{"valid", res.valid}};
  if (!res.valid) {
    if (res.failed_step) j["failed_step"] = *res.failed_step;
    j["reason"] = res.reason;
    err << "verify: failed";
    if (res.failed_step) err << " at step " << *res.failed_step;
    err << ": " << res.reason << '\n';
  }
  out << j.dump() << '\n';
  return res.valid ? kOk : kNegative;
}

inline int cmd_apply(const std::string& graph_path, const std::string& moves_path, std::ostream& out, std::ostream& err) {
  PlumbingGraph g;
  std::vector<MoveApplication> moves;
  try {
    g = detail::require_valid(detail::read_json_file(graph_path));
    json mj = detail::read_json_file(moves_path);
    if (mj.is_object() && mj.contains("moves")) mj = mj["moves"];
    moves = moves_from_json(mj);
  } catch (const detail::IoError& e) {
    err << "apply: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "apply: " << e.what() << '\n';
    return kUsage;
  }
  for (std::size_t i = 0; i < moves.size(); ++i) {
    try {
      g = apply_move(g, moves[i]);
    } catch (const std::exception& e) {
      out << json{{"error", e.what()}, {"step", i}}.dump() << '\n';
      err << "apply: step " << i << ": " << e.what() << '\n';
      return kNegative;
    }
  }
  out << graph_to_json(g).dump() << '\n';
  return kOk;
}

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Plumbing graph calculus: dataset generation, move search and certificate checking", "plumb"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a labelled pair dataset (JSON Lines)");
  gen_cmd->add_option("--out", gen.out, "output path")->required();
  gen_cmd->add_option("--count", gen.count, "number of pairs")->required();
  gen_cmd->add_option("--equiv-frac", gen.equiv_frac, "fraction of EquivPair records");
  gen_cmd->add_option("--tweak-frac", gen.tweak_frac, "fraction of TweakPair records");
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--nmax", gen.nmax, "scramble steps per graph");
  gen_cmd->add_option("--max-vertices", gen.max_vertices, "largest random base graph");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "search for a move sequence between two graphs");
  check_cmd->add_option("--pair", check.pair, "file holding two graphs")->required();
  check_cmd->add_option("--max-states", check.max_states, "state budget")->required();
  check_cmd->add_option("--max-depth", check.max_depth, "depth budget")->required();
  check_cmd->add_option("--time-limit", check.time_limit, "seconds");

  std::string cert_path;
  auto* verify_cmd = app.add_subcommand("verify", "replay a certificate");
  verify_cmd->add_option("--cert", cert_path, "certificate file")->required();

  std::string graph_path, moves_path;
  auto* apply_cmd = app.add_subcommand("apply", "replay moves on a graph");
  apply_cmd->add_option("--graph", graph_path, "graph file")->required();
  apply_cmd->add_option("--moves", moves_path, "moves file")->required();

  std::vector<const char*> argv{"plumb"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  if (*gen_cmd) return cmd_gen(gen, out, err);
  if (*check_cmd) return cmd_check(check, out, err);
  if (*verify_cmd) return cmd_verify(cert_path, out, err);
  if (*apply_cmd) return cmd_apply(graph_path, moves_path, out, err);
  return kUsage;
}

}  // namespace plumbing::cli
