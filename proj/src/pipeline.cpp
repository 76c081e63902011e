// Copyright 2026 qlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "qlat/adder.hpp"
#include "qlat/cartoon.hpp"
#include "qlat/unary.hpp"

namespace qlat {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

[[noreturn]] void unsupported(const ProblemInstance& inst, Strategy s) {
  throw DocumentError("strategy: " + strategy_name(s) + " is not available for " +
                         instance_kind(inst) + " instances");
}

int cell_J(const EmbedSettings& s) {
  if (!s.lattice) return 4;
  if (s.lattice->cell.chimera_J < 1)
    throw UnsupportedCell("constructive embeddings need a chimera cell");
  return s.lattice->cell.chimera_J;
}

EmbeddedQubo embed_into_clique(const Qubo& logical, int J) {
  return embed_qubo(logical, embed_complete_chimera(std::max(logical.num_vars(), 1), J));
}

int knapsack_window(const KnapsackInstance& k) {
  const int w = knapsack_value_width(k);
  if (w < 1) throw InvalidParameter("knapsack: no value bits");
  return w - 1;
}

// Rehosting, normalization and noise, in that order.
void finish(Compiled& c, const EmbedSettings& s) {
  if (s.lattice) c.embedded = rehost(c.embedded, *s.lattice);
  if (s.normalize) {
    Normalized n = normalize_couplings(to_spin(c.embedded.physical));
    c.embedded.physical = std::move(n.qubo);
    c.scale = n.scale;
  }
  if (s.noise)
    c.embedded.physical = apply_noise(
        c.embedded.physical, NoiseModel{*s.noise, SeedStreams(s.seed).noise});
}

Compiled compile_tree(const KnapsackInstance& k, SummationTreeQubo tree,
                      const EmbedSettings& s) {
  Compiled c;
  c.instance = k;
  c.strategy = s.strategy;
  if (s.strategy == Strategy::Tree)
    c.embedded = embed_summation_tree(tree, cell_J(s)).embedded;
  else if (s.strategy == Strategy::Complete)
    c.embedded = embed_into_clique(tree.qubo, cell_J(s));
  else
    unsupported(k, s.strategy);
  c.tree = std::move(tree);
  finish(c, s);
  return c;
}

AnnealResult run_solver(const EmbeddedQubo& e, const SolveSettings& s) {
  const Qubo& q = e.physical;
  if (s.solver == SolverKind::Brute) return exact_minimize(q);
  AnnealOptions o;
  o.clusters.assign(e.embedding.num_logical(), {});
  for (std::size_t slot = 0; slot < e.chain_of.size(); ++slot)
    o.clusters[e.chain_of[slot]].push_back(static_cast<int>(slot));
  std::erase_if(o.clusters, [](const auto& c) { return c.size() < 2; });
  o.sweeps = s.sweeps;
  o.restarts = s.restarts;
  o.seed = SeedStreams(s.seed).anneal;
  return anneal_solve(q, o);
}

Json header(const std::string& command, std::uint64_t seed) {
  Json h;
  h["command"] = command;
  h["seed"] = seed;
  return h;
}

std::string violation_kind(ViolationKind k) {
  switch (k) {
    case ViolationKind::EmptyChain: return "empty_chain";
    case ViolationKind::OutOfRange: return "out_of_range";
    case ViolationKind::Disconnected: return "disconnected";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::MissingEdge: return "missing_edge";
  }
  return "unknown";
}

Json spectrum_json(const Qubo& q) {
  Json j;
  j["num_vars"] = q.num_vars();
  Spectrum s;
  if (q.num_vars() <= 24) {
    BruteForceOptions o;
    o.max_stored_states = 0;
    s = brute_force(q, o);
    j["method"] = "enumeration";
  } else {
    s = eliminate(q);
    j["method"] = "elimination";
  }
  j["ground_energy"] = s.ground_energy;
  j["gap"] = s.gap;
  j["ground_count"] = s.state_count_at_ground;
  j["degenerate"] = s.degenerate;
  return j;
}

double need(const std::map<std::string, double>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw DocumentError("predict: missing --" + key);
  return it->second;
}

int need_int(const std::map<std::string, double>& p, const std::string& key,
             int fallback = -1) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (fallback >= 0) return fallback;
    throw DocumentError("predict: missing --" + key);
  }
  if (it->second != std::floor(it->second) || it->second < 1)
    throw DocumentError("predict: --" + key + " must be a positive integer");
  return static_cast<int>(it->second);
}

}  // namespace

Strategy parse_strategy(std::string_view s) {
  if (s == "tree") return Strategy::Tree;
  if (s == "complete") return Strategy::Complete;
  if (s == "tiles") return Strategy::Tiles;
  throw DocumentError("strategy: expected tree, complete or tiles");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Tree: return "tree";
    case Strategy::Complete: return "complete";
    case Strategy::Tiles: return "tiles";
  }
  return "";
}

SolverKind parse_solver(std::string_view s) {
  if (s == "brute") return SolverKind::Brute;
  if (s == "anneal") return SolverKind::Anneal;
  throw DocumentError("solver: expected brute or anneal");
}

std::string solver_name(SolverKind s) {
  return s == SolverKind::Brute ? "brute" : "anneal";
}

SeedStreams::SeedStreams(std::uint64_t s) : seed(s) {
  std::mt19937_64 rng(s);
  noise = rng();
  anneal = rng();
}

Strategy default_strategy(const ProblemInstance& inst) {
  if (std::holds_alternative<ColoringInstance>(inst) ||
      std::holds_alternative<HamcycleInstance>(inst))
    return Strategy::Tiles;
  if (std::holds_alternative<AdderRequest>(inst)) return Strategy::Complete;
  return Strategy::Tree;
}

BuiltQubo build_logical(const ProblemInstance& inst, Strategy s) {
  return std::visit(
      Overloaded{
          [&](const PartitionInstance& p) -> BuiltQubo {
            return {build_numpart_qubo(p).qubo, {}};
          },
          [&](const KnapsackInstance& k) -> BuiltQubo {
            k.check();
            return {build_knapsack_qubo(k, knapsack_window(k)).qubo, {}};
          },
          [&](const ColoringInstance& c) -> BuiltQubo {
            if (s == Strategy::Tiles) return {compile_coloring(c).embedded.logical, {}};
            return {coloring_reference_qubo(c), {}};
          },
          [&](const HamcycleInstance& h) -> BuiltQubo {
            if (s == Strategy::Tiles) return {build_tileable_hamcycle(h).qubo, {}};
            return {build_ic_qubo(h).qubo, {}};
          },
          [&](const UnaryRequest& u) -> BuiltQubo {
            if (s == Strategy::Tree) return {fractal_embed_unary(u.N, 4).logical, {}};
            return {build_unary_qubo(u.N).qubo, {}};
          },
          [&](const AdderRequest& a) -> BuiltQubo {
            AdderQubo q = build_adder(a.n);
            return {std::move(q.qubo), std::move(q.roles)};
          }},
      inst);
}

Compiled compile(const ProblemInstance& inst, const EmbedSettings& s) {
  if (const auto* k = std::get_if<KnapsackInstance>(&inst)) {
    k->check();
    const int w = knapsack_window(*k);
    Compiled c = compile_tree(*k, build_knapsack_qubo(*k, w), s);
    c.window_exponent = w;
    return c;
  }
  Compiled c;
  c.instance = inst;
  c.strategy = s.strategy;
  const int J = cell_J(s);
  std::visit(
      Overloaded{
          [&](const PartitionInstance& p) {
            if (s.strategy == Strategy::Tree) {
              SumEmbedding se = embed_numpart(p, J);
              c.embedded = std::move(se.embedded);
              c.tree = std::move(se.tree);
            } else if (s.strategy == Strategy::Complete) {
              c.tree = build_numpart_qubo(p);
              c.embedded = embed_into_clique(c.tree->qubo, J);
            } else {
              unsupported(inst, s.strategy);
            }
          },
          [&](const KnapsackInstance&) {},
          [&](const ColoringInstance& col) {
            if (s.strategy == Strategy::Tiles) {
              c.coloring = compile_coloring(col);
              c.embedded = c.coloring->embedded;
            } else if (s.strategy == Strategy::Complete) {
              c.embedded = embed_into_clique(coloring_reference_qubo(col), J);
            } else {
              unsupported(inst, s.strategy);
            }
          },
          [&](const HamcycleInstance& h) {
            if (s.strategy == Strategy::Tiles)
              c.embedded = embed_tileable_hamcycle(h, J);
            else if (s.strategy == Strategy::Complete)
              c.embedded = embed_into_clique(build_ic_qubo(h).qubo, J);
            else
              unsupported(inst, s.strategy);
          },
          [&](const UnaryRequest& u) {
            if (s.strategy == Strategy::Tree) {
              FractalUnary f = fractal_embed_unary(u.N, J);
              c.embedded = std::move(f.embedded);
              c.leaves = std::move(f.leaves);
              c.layout = std::move(f.layout.node_cell);
            } else if (s.strategy == Strategy::Complete) {
              UnaryTreeQubo t = build_unary_qubo(u.N);
              c.leaves.assign(t.leaf_index.begin(), t.leaf_index.begin() + u.N);
              c.embedded = embed_into_clique(t.qubo, J);
            } else {
              unsupported(inst, s.strategy);
            }
          },
          [&](const AdderRequest& a) {
            if (s.strategy != Strategy::Complete) unsupported(inst, s.strategy);
            AdderQubo q = build_adder(a.n);
            c.roles = std::move(q.roles);
            c.embedded = embed_into_clique(q.qubo, J);
          }},
      inst);
  finish(c, s);
  return c;
}

EmbeddedQubo rehost(const EmbeddedQubo& e, const LatticeSpec& target) {
  const LatticeSpec& src = e.embedding.lattice;
  if (!(src.cell == target.cell))
    throw InvalidParameter("lattice cell differs from the construction's cell");
  const int n = src.cell.n;
  int rows = 0, cols = 0;
  for (const auto& chain : e.embedding.chains)
    for (int v : chain) {
      rows = std::max(rows, v / n / src.cols + 1);
      cols = std::max(cols, v / n % src.cols + 1);
    }
  if (rows > target.rows || cols > target.cols) {
    throw InfeasibleEmbedding(
        target.square() ? "embedding requires L=" + std::to_string(std::max(rows, cols))
                        : "embedding requires " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " cells");
  }
  auto map = [&](int v) {
    const int cell = v / n;
    return ((cell / src.cols) * target.cols + cell % src.cols) * n + v % n;
  };
  EmbeddedQubo out = e;
  out.embedding.lattice = target;
  for (auto& chain : out.embedding.chains)
    for (int& v : chain) v = map(v);
  for (int& v : out.vertex_of) v = map(v);
  for (auto& p : out.placements)
    p.physical = {map(p.physical.first), map(p.physical.second)};
  return out;
}

Decoded decode(const Compiled& c, std::span<const int> logical) {
  Decoded d;
  std::visit(
      Overloaded{
          [&](const PartitionInstance& p) {
            PartitionDecoding r = decode_partition(p, *c.tree, logical);
            d.solution["set_a"] = r.set_a;
            d.solution["set_b"] = r.set_b;
            d.solution["sum_a"] = r.sum_a;
            d.solution["sum_b"] = r.sum_b;
            d.solution["residual"] = r.residual;
            d.solution["balanced"] = r.balanced;
            d.ok = r.balanced;
          },
          [&](const KnapsackInstance& k) {
            KnapsackDecoding r = decode_knapsack(k, *c.tree, logical);
            d.solution["items"] = r.items;
            d.solution["value"] = r.value;
            d.solution["weight"] = r.weight;
            d.solution["within_capacity"] = r.within_capacity;
            d.ok = r.within_capacity;
          },
          [&](const ColoringInstance& col) {
            std::optional<std::vector<int>> colors;
            if (c.coloring) {
              colors = decode_coloring(*c.coloring, logical);
            } else {
              std::vector<int> v(col.graph.n, -1);
              bool ok = true;
              for (int u = 0; u < col.graph.n && ok; ++u)
                for (int i = 0; i < col.q; ++i)
                  if (logical[u * col.q + i] == 1) {
                    ok = v[u] < 0;
                    v[u] = i;
                  }
              for (auto [a, b] : col.graph.edges) ok = ok && v[a] != v[b];
              if (ok && std::find(v.begin(), v.end(), -1) == v.end()) colors = v;
            }
            if (colors) d.solution["colors"] = *colors;
            else d.solution["colors"] = nullptr;
            d.ok = colors.has_value();
          },
          [&](const HamcycleInstance& h) {
            CycleDecode r = decode_cycle(logical, h);
            if (r.ok()) d.solution = cycle_to_json(r.cycle);
            else d.solution["failure"] = r.failure;
            d.ok = r.ok();
          },
          [&](const UnaryRequest&) {
            std::vector<int> bits;
            for (int id : c.leaves) bits.push_back(logical[id]);
            d.solution["leaves"] = bits;
            d.ok = std::count(bits.begin(), bits.end(), 1) == 1;
          },
          [&](const AdderRequest& a) {
            auto value = [&](const std::string& who, int width) {
              std::uint64_t v = 0;
              for (int j = 0; j < width; ++j)
                if (logical[c.roles.at(who + ":" + std::to_string(j))] == 1)
                  v |= std::uint64_t{1} << j;
              return v;
            };
            const auto x1 = value("x1", a.n), x2 = value("x2", a.n),
                       y = value("y", a.n + 1);
            d.solution["x1"] = x1;
            d.solution["x2"] = x2;
            d.solution["y"] = y;
            d.ok = x1 + x2 == y;
          }},
      c.instance);
  return d;
}

Json cmd_lattice(const LatticeSpec& spec) { return lattice_to_json(spec); }

Json cmd_build(const ProblemInstance& inst, Strategy s) {
  BuiltQubo b = build_logical(inst, s);
  return qubo_to_json(b.qubo, b.roles);
}

Json cmd_embed(const ProblemInstance& inst, const EmbedSettings& s) {
  const Compiled c = compile(inst, s);
  Json j;
  j["qlat"] = header("embed", s.seed);
  j["qlat"]["strategy"] = strategy_name(s.strategy);
  j["qlat"]["normalize"] = s.normalize;
  j["qlat"]["noise"] = s.noise ? Json(*s.noise) : Json(nullptr);
  j["instance"] = instance_to_json(inst);
  if (c.window_exponent >= 0) j["window_exponent"] = c.window_exponent;
  if (s.normalize) j["scale"] = c.scale;
  j["embedding"] = embedding_to_json(c.embedded.embedding, c.layout);
  j["slots"] = c.embedded.vertex_of;
  j["logical"] = qubo_to_json(c.embedded.logical, c.roles);
  j["physical"] = qubo_to_json(c.embedded.physical);
  return j;
}

CommandResult cmd_solve(const Json& input, const EmbedSettings& embed,
                        const SolveSettings& solve) {
  EmbedSettings es = embed;
  ProblemInstance inst;
  std::optional<Qubo> physical;
  if (input.is_object() && input.contains("embedding")) {
    const Json& h = input.at("qlat");
    inst = instance_from_json(input.at("instance"));
    es.strategy = parse_strategy(h.at("strategy").get<std::string>());
    es.normalize = h.at("normalize").get<bool>();
    es.noise.reset();
    es.lattice = lattice_from_json(input.at("embedding").at("lattice"));
    physical = qubo_from_json(input.at("physical"));
  } else {
    inst = instance_from_json(input);
  }

  CommandResult out;
  Json& j = out.doc;
  j["qlat"] = header("solve", solve.seed);
  j["qlat"]["solver"] = solver_name(solve.solver);
  j["qlat"]["strategy"] = strategy_name(es.strategy);
  j["instance"] = instance_to_json(inst);

  if (const auto* k = std::get_if<KnapsackInstance>(&inst)) {
    k->check();
    int broken = 0;
    Json energies = Json::array();
    SweepResult r = knapsack_sweep_trees(*k, [&](const SummationTreeQubo& t) {
      const Compiled c = compile_tree(*k, t, es);
      const AnnealResult a = run_solver(c.embedded, solve);
      Unembedded u = unembed(c.embedded, a.assignment);
      broken += u.broken_chains;
      const double e = c.embedded.logical.evaluate(u.logical);
      energies.push_back(e);
      return AnnealResult{std::move(u.logical), e};
    });
    j["energies"] = std::move(energies);
    j["broken_chains"] = broken;
    j["solution"]["items"] = r.best.items;
    j["solution"]["value"] = r.best.value;
    j["solution"]["weight"] = r.best.weight;
    j["solution"]["within_capacity"] = r.best.within_capacity;
    j["solution"]["window_exponent"] = r.window_exponent;
    j["solution"]["solves"] = r.solves;
    j["valid"] = r.best.within_capacity;
    out.exit_code = r.best.within_capacity ? 0 : 1;
    return out;
  }

  Compiled c = compile(inst, es);
  if (physical) {
    if (physical->num_vars() != c.embedded.physical.num_vars())
      throw DocumentError("physical: variable count differs from the rebuilt embedding");
    c.embedded.physical = std::move(*physical);
  }
  const AnnealResult a = run_solver(c.embedded, solve);
  const Unembedded u = unembed(c.embedded, a.assignment);
  const Decoded d = decode(c, u.logical);
  j["energy"] = a.energy;
  j["logical_energy"] = c.embedded.logical.evaluate(u.logical);
  j["broken_chains"] = u.broken_chains;
  j["solution"] = d.solution;
  j["valid"] = d.ok;
  out.exit_code = d.ok ? 0 : 1;
  return out;
}

CommandResult cmd_validate(const Json& input, const std::optional<Qubo>& logical,
                           bool complete) {
  const bool embedded = input.is_object() && input.contains("embedding");
  const MinorEmbedding e =
      embedding_from_json(embedded ? input.at("embedding") : input);
  Graph g{e.num_logical(), {}};
  std::string against = "chains";
  if (embedded && input.contains("logical")) {
    g = interaction_graph(qubo_from_json(input.at("logical")));
    against = "logical";
  } else if (logical) {
    g = interaction_graph(*logical);
    against = "logical";
  } else if (complete) {
    g = Graph::complete(e.num_logical());
    against = "complete";
  }
  if (g.n != e.num_logical())
    throw DocumentError("logical QUBO has " + std::to_string(g.n) +
                        " variables but the embedding has " +
                        std::to_string(e.num_logical()) + " chains");
  const ValidationReport r = validate(e, g);
  CommandResult out;
  Json& j = out.doc;
  j["valid"] = r.ok();
  j["checked_against"] = against;
  j["logical_vertices"] = e.num_logical();
  j["logical_edges"] = g.edges.size();
  j["physical_vertices"] = e.num_physical();
  j["lattice"] = lattice_to_json(e.lattice);
  Json v = Json::array();
  for (const Violation& x : r.violations) {
    Json item;
    item["kind"] = violation_kind(x.kind);
    item["u"] = x.u;
    if (x.v >= 0) item["v"] = x.v;
    if (x.witness >= 0) item["witness"] = x.witness;
    v.push_back(std::move(item));
  }
  j["violations"] = std::move(v);
  out.exit_code = r.ok() ? 0 : 1;
  return out;
}

Json cmd_gap(const Json& input) {
  if (!input.is_object()) throw DocumentError("document: expected an object");
  if (input.contains("domain")) return spectrum_json(qubo_from_json(input));
  if (input.contains("physical")) return spectrum_json(qubo_from_json(input.at("physical")));
  const ProblemInstance inst = instance_from_json(input);
  const auto* col = std::get_if<ColoringInstance>(&inst);
  if (!col) throw DocumentError("gap: expected a QUBO, embedded or coloring document");
  const ColoringTileSet t = build_tileset(col->q);
  const GapMode mode = col->q <= 4 ? GapMode::Full : GapMode::ChainIntact;
  Json j;
  j["q"] = col->q;
  j["mode"] = mode == GapMode::Full ? "full" : "chain_intact";
  const std::pair<Assembly, const char*> assemblies[] = {
      {Assembly::OneTile, "one_tile"},
      {Assembly::TwoTileHorizontal, "two_tile_horizontal"},
      {Assembly::TwoTileVertical, "two_tile_vertical"},
      {Assembly::Chain, "chain"}};
  for (auto [a, name] : assemblies) {
    const Spectrum s = verify_gap(t, a, mode);
    j["assemblies"][name]["gap"] = s.gap;
    j["assemblies"][name]["expected"] = expected_gap(t, a);
    j["assemblies"][name]["ground_count"] = s.state_count_at_ground;
  }
  return j;
}

Json cmd_predict(std::string_view kind, const std::map<std::string, double>& p) {
  Json j;
  j["kind"] = kind;
  if (kind == "numpart") {
    const double N = need(p, "N"), M = need(p, "M");
    const int J = need_int(p, "J", 4);
    j["tree"] = predicted_numpart_length(N, M, J, NumpartStrategy::Tree);
    j["linear"] = predicted_numpart_length(N, M, J, NumpartStrategy::Linear);
  } else if (kind == "knapsack") {
    j["tree"] = predicted_knapsack_length(need(p, "N"), need(p, "value-bits"),
                                          need(p, "weight-bits"), need_int(p, "J", 4));
  } else if (kind == "unary") {
    const double N = need(p, "N");
    const int J = need_int(p, "J", 4);
    j["plain"] = predicted_unary_length(N, J, false);
    j["optimized"] = predicted_unary_length(N, J, true);
  } else if (kind == "clique") {
    const int N = need_int(p, "N"), J = need_int(p, "J", 4);
    j["L"] = (N + J - 1) / J;
  } else if (kind == "hamcycle") {
    const int N = need_int(p, "N");
    j["complete"] = complete_hamcycle_length(N);
    j["permutation_tree"] = permutation_tree_length(N);
    if (p.count("LG")) {
      const int LG = need_int(p, "LG");
      j["tileable_estimate"] = tileable_hamcycle_estimate(N, LG);
      j["tileable_bound"] = tileable_hamcycle_bound(N, LG);
      j["tileable_side"] = tileable_hamcycle_side(N, LG, need_int(p, "J", 4));
    }
  } else {
    throw DocumentError("predict: kind must be numpart, knapsack, unary, clique or hamcycle");
  }
  return j;
}

std::string cmd_cartoon(int n_min, int n_max, char delimiter) {
  if (n_min < 0 || n_max < n_min) throw DocumentError("cartoon: bad N range");
  std::ostringstream out;
  const char d = delimiter;
  out << "N" << d << "epsilon" << d << "gap" << d << "s_star" << d
      << "tau_linear" << d << "tau_optimal\n";
  char buf[256];
  for (int N = n_min; N <= n_max; ++N) {
    const MinGap g = min_gap(N);
    std::snprintf(buf, sizeof buf, "%d%c%.17g%c%.17g%c%.17g%c%.17g%c%.17g\n", N, d,
                  CartoonModel{N, 0.0}.epsilon(), d, g.gap, d, g.s, d,
                  lz_time(N, Schedule::Linear), d, lz_time(N, Schedule::Optimal));
    out << buf;
  }
  return out.str();
}

}  // namespace qlat
