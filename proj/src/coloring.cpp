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

#include "qlat/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "qlat/adder.hpp"
#include "qlat/errors.hpp"

namespace qlat {

ColoringCoefficients paper_coefficients(int q) {
  ColoringCoefficients c;
  if (q > 4) {
    c.A = 0.5;
    c.B = -1.0;
    c.C = 1.0;
    c.D = 0.5;
    c.E = 2.0;
    c.F = -1.0;
    c.G = 1.0 / 3.0;
    c.lambda = 2.0 / 3.0;
  }
  return c;
}

Qubo h_diag() {
  Qubo h(8, Domain::Spin);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) h.add_quadratic(i, 4 + j, 1.0);
    h.add_quadratic(i, 4 + i, -2.0);
    h.add_linear(i, 2.0);
    h.add_linear(4 + i, 2.0);
  }
  h.prune();
  return h;
}

Qubo h_off() {
  Qubo h(8, Domain::Spin);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) h.add_quadratic(i, 4 + j, 0.5);
    h.add_linear(i, 2.0);
    h.add_linear(4 + i, 2.0);
  }
  return h;
}

namespace {

int tile_side_for(int q) { return (q + 3) / 4; }

TileTemplate clamp_template(const TileTemplate& full, int q) {
  std::vector<std::pair<int, int>> fixed;
  for (int k = 0; k < static_cast<int>(full.sites.size()); ++k)
    if (full.sites[k].bit >= q) fixed.emplace_back(k, -1);
  if (fixed.empty()) return full;
  auto c = clamp(full.qubo, fixed);
  TileTemplate out;
  out.qubo = c.qubo;
  out.sites.resize(c.qubo.num_vars());
  for (int k = 0; k < static_cast<int>(full.sites.size()); ++k)
    if (c.new_id[k] >= 0) out.sites[c.new_id[k]] = full.sites[k];
  return out;
}

PairTemplate clamp_template(const PairTemplate& full, int q) {
  std::vector<std::pair<int, int>> fixed;
  for (int k = 0; k < static_cast<int>(full.sites.size()); ++k)
    if (full.sites[k].site.bit >= q) fixed.emplace_back(k, -1);
  if (fixed.empty()) return full;
  auto c = clamp(full.qubo, fixed);
  PairTemplate out;
  out.qubo = c.qubo;
  out.sites.resize(c.qubo.num_vars());
  for (int k = 0; k < static_cast<int>(full.sites.size()); ++k)
    if (c.new_id[k] >= 0) out.sites[c.new_id[k]] = full.sites[k];
  return out;
}

TileTemplate vertex_template(int l, const ColoringCoefficients& c) {
  TileTemplate t;
  t.qubo = Qubo(0, Domain::Spin);
  // id[y][x][a]
  std::vector<int> id(l * l * 8);
  auto at = [&](int x, int y, int a) -> int& { return id[(y * l + x) * 8 + a]; };
  for (int y = 0; y < l; ++y)
    for (int x = 0; x < l; ++x)
      for (int a = 0; a < 8; ++a) {
        at(x, y, a) = t.qubo.add_var();
        int bit = a < 4 ? 4 * y + a : 4 * x + (a - 4);
        t.sites.push_back({x, y, a, bit});
      }
  const double lam = c.lambda;
  for (int y = 0; y < l; ++y)
    for (int x = 0; x < l; ++x) {
      bool diag = x == y;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
          t.qubo.add_quadratic(at(x, y, i), at(x, y, 4 + j),
                               lam * (diag ? c.A : c.D));
        if (diag) t.qubo.add_quadratic(at(x, y, i), at(x, y, 4 + i), lam * c.B);
        double field = lam * (diag ? c.C : c.E);
        t.qubo.add_linear(at(x, y, i), field);
        t.qubo.add_linear(at(x, y, 4 + i), field);
        if (x + 1 < l) t.qubo.add_quadratic(at(x, y, i), at(x + 1, y, i), lam * c.F);
        if (y + 1 < l)
          t.qubo.add_quadratic(at(x, y, 4 + i), at(x, y + 1, 4 + i), lam * c.F);
      }
    }
  t.qubo.prune();
  return t;
}

// Boundary pair template; edges use G (s+1)(s'+1), chains -s s'.
PairTemplate boundary_template(int l, bool horizontal, bool edge, double G) {
  PairTemplate t;
  t.qubo = Qubo(0, Domain::Spin);
  for (int k = 0; k < l; ++k)
    for (int i = 0; i < 4; ++i) {
      TileSite a, b;
      if (horizontal) {
        a = {l - 1, k, i, 4 * k + i};
        b = {0, k, i, 4 * k + i};
      } else {
        a = {k, l - 1, 4 + i, 4 * k + i};
        b = {k, 0, 4 + i, 4 * k + i};
      }
      int u = t.qubo.add_var();
      int v = t.qubo.add_var();
      t.sites.push_back({0, a});
      t.sites.push_back({1, b});
      if (edge) {
        t.qubo.add_quadratic(u, v, G);
        t.qubo.add_linear(u, G);
        t.qubo.add_linear(v, G);
        t.qubo.add_offset(G);
      } else {
        t.qubo.add_quadratic(u, v, -1.0);
      }
    }
  return t;
}

PairTemplate crossing_template(int l) {
  PairTemplate t;
  t.qubo = Qubo(0, Domain::Spin);
  for (int k = 0; k < l; ++k)
    for (int i = 0; i < 4; ++i) {
      int prev = -1;
      for (int x = 0; x < l; ++x) {
        int v = t.qubo.add_var();
        t.sites.push_back({0, {x, k, i, 4 * k + i}});
        if (prev >= 0) t.qubo.add_quadratic(prev, v, -1.0);
        prev = v;
      }
      prev = -1;
      for (int y = 0; y < l; ++y) {
        int v = t.qubo.add_var();
        t.sites.push_back({1, {k, y, 4 + i, 4 * k + i}});
        if (prev >= 0) t.qubo.add_quadratic(prev, v, -1.0);
        prev = v;
      }
    }
  return t;
}

ColoringTileSet make_tileset(int q, const ColoringCoefficients& coef) {
  if (q < 1) throw InvalidParameter("coloring needs q >= 1");
  ColoringTileSet out;
  out.q = q;
  out.coef = coef;
  int l = tile_side_for(q);
  out.tile_side = l;
  auto& t = out.tiles;
  t.tile_side = l;
  t.bits = q;
  t.vertex_tile = clamp_template(vertex_template(l, coef), q);
  t.edge_horizontal = clamp_template(boundary_template(l, true, true, coef.G), q);
  t.edge_vertical = clamp_template(boundary_template(l, false, true, coef.G), q);
  t.chain_horizontal = clamp_template(boundary_template(l, true, false, 0), q);
  t.chain_vertical = clamp_template(boundary_template(l, false, false, 0), q);
  t.crossing = clamp_template(crossing_template(l), q);
  return out;
}

Graph make_graph(int n, std::vector<Edge> edges) {
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

struct AssemblyParts {
  ColoringInstance inst;
  std::vector<std::string> pattern;
};

AssemblyParts assembly_parts(Assembly a, int q) {
  switch (a) {
    case Assembly::OneTile:
      return {{make_graph(1, {}), q}, {"A"}};
    case Assembly::TwoTileHorizontal:
      return {{make_graph(2, {{0, 1}}), q}, {"AB"}};
    case Assembly::TwoTileVertical:
      return {{make_graph(2, {{0, 1}}), q}, {"A", "B"}};
    case Assembly::Chain:
      break;
  }
  return {{make_graph(1, {}), q}, {"AA"}};
}

CompiledColoring compile_with(const ColoringInstance& inst,
                              const ColoringTileSet& ts, const TilePlan& plan,
                              const StitchOptions& opt) {
  CompiledColoring out;
  out.instance = inst;
  out.plan = plan;
  out.tileset = ts;
  int L = std::max(1, ts.tile_side * plan.side());
  out.embedded = stitch(plan, ts.tiles, chimera_spec(4, L), opt);
  return out;
}

Spectrum spectrum_of(const Qubo& q) {
  if (q.num_vars() <= 24) return brute_force(q);
  return eliminate(q);
}

}  // namespace

ColoringTileSet build_tileset(int q) { return build_tileset(q, paper_coefficients(q)); }

ColoringTileSet build_tileset(int q, const ColoringCoefficients& coef) {
  if (q < 2) throw InvalidParameter("coloring with q < 2 is trivial");
  return make_tileset(q, coef);
}

Qubo coloring_reference_qubo(const ColoringInstance& inst) {
  const int q = inst.q;
  Qubo h(inst.graph.n * q, Domain::Binary);
  std::vector<std::pair<int, double>> terms;
  for (int v = 0; v < inst.graph.n; ++v) {
    terms.clear();
    for (int i = 0; i < q; ++i) terms.emplace_back(v * q + i, 1.0);
    h.add_square(1.0, -1.0, terms);
  }
  for (auto [u, v] : inst.graph.edges)
    for (int i = 0; i < q; ++i) h.add_quadratic(u * q + i, v * q + i, 1.0);
  return h;
}

CompiledColoring compile_coloring(const ColoringInstance& inst,
                                  const StitchOptions& opt) {
  auto ts = make_tileset(inst.q, paper_coefficients(inst.q));
  auto plan = route_graph_to_tiles(inst.graph, ts.tile_side);
  return compile_with(inst, ts, plan, opt);
}

Assignment coloring_spins(const CompiledColoring& c,
                          std::span<const int> colors) {
  const int q = c.instance.q;
  Assignment s(c.instance.graph.n * q, -1);
  for (int v = 0; v < c.instance.graph.n; ++v) {
    if (colors[v] < 0 || colors[v] >= q)
      throw InvalidAssignment("color out of range");
    s[v * q + colors[v]] = 1;
  }
  return s;
}

double feasible_energy(const CompiledColoring& c) {
  std::vector<int> zero(c.instance.graph.n, 0);
  auto spins = coloring_spins(c, zero);
  double e = c.embedded.logical.evaluate(spins);
  // Each same-colored edge pays its boundary term once: G (2)(2).
  return e - 4.0 * c.tileset.coef.G *
                 static_cast<double>(c.plan.edges.size());
}

std::optional<std::vector<int>> decode_coloring(const CompiledColoring& c,
                                                std::span<const int> logical) {
  const int q = c.instance.q;
  std::vector<int> colors(c.instance.graph.n, -1);
  for (int v = 0; v < c.instance.graph.n; ++v)
    for (int i = 0; i < q; ++i)
      if (logical[v * q + i] == 1) {
        if (colors[v] >= 0) return std::nullopt;
        colors[v] = i;
      }
  for (int col : colors)
    if (col < 0) return std::nullopt;
  return colors;
}

std::uint64_t count_proper_colorings(const Graph& g, int q) {
  std::vector<int> col(g.n, -1);
  std::function<std::uint64_t(int)> rec = [&](int v) -> std::uint64_t {
    if (v == g.n) return 1;
    std::uint64_t total = 0;
    for (int c = 0; c < q; ++c) {
      bool ok = true;
      for (auto [a, b] : g.edges) {
        int other = a == v ? b : (b == v ? a : -1);
        if (other >= 0 && other < v && col[other] == c) ok = false;
      }
      if (!ok) continue;
      col[v] = c;
      total += rec(v + 1);
    }
    col[v] = -1;
    return total;
  };
  return rec(0);
}

Spectrum verify_gap(const ColoringTileSet& t, Assembly a, GapMode mode) {
  if (a == Assembly::Chain) return brute_force(t.tiles.chain_horizontal.qubo);
  auto parts = assembly_parts(a, t.q);
  auto plan = plan_from_pattern(parts.pattern, parts.inst.graph, t.tile_side);
  auto c = compile_with(parts.inst, t, plan, {});
  if (mode == GapMode::ChainIntact) {
    if (c.embedded.logical.num_vars() > 28)
      throw CapExceeded("chain-intact assembly exceeds the enumeration cap");
    return brute_force(c.embedded.logical);
  }
  return spectrum_of(c.embedded.physical);
}

double expected_gap(const ColoringTileSet& t, Assembly a) {
  const auto& c = t.coef;
  double tile = (t.q <= 4 ? 4.0 : 2.0) * c.lambda;
  switch (a) {
    case Assembly::OneTile:
      return tile;
    case Assembly::Chain:
      return 2.0;
    default:
      return std::min(tile, 4.0 * c.G);
  }
}

bool within_budget(int q, const ColoringCoefficients& c) {
  const double tol = 1e-9;
  if (c.lambda <= 0.0 || c.lambda > 1.0 + tol) return false;
  if (std::abs(c.A) > 1 + tol || std::abs(c.A + c.B) > 1 + tol ||
      std::abs(c.C) > 2 + tol || std::abs(c.G) > 1 + tol)
    return false;
  if (q > 4 && (std::abs(c.D) > 1 + tol || std::abs(c.E) > 2 + tol ||
                std::abs(c.F) > 1 + tol))
    return false;
  // Star assembly: the center tile has a neighbor on every side.
  auto ts = make_tileset(q, c);
  ColoringInstance star{make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}), q};
  const std::vector<std::string> pattern = {".B.", "CAD", ".E."};
  auto plan = plan_from_pattern(pattern, star.graph, ts.tile_side);
  auto comp = compile_with(star, ts, plan, {});
  return max_offdiagonal(comp.embedded.physical) <= 1 + tol &&
         max_field(comp.embedded.physical) <= 2 + tol;
}

namespace {

// Two-tile edge gap, zero unless the ground states are exactly the proper
// colorings of one edge.
double edge_gap(int q, const ColoringCoefficients& coef, GapMode mode) {
  auto ts = make_tileset(q, coef);
  auto parts = assembly_parts(Assembly::TwoTileHorizontal, q);
  auto plan = plan_from_pattern(parts.pattern, parts.inst.graph, ts.tile_side);
  auto c = compile_with(parts.inst, ts, plan, {});
  BruteForceOptions opt;
  opt.threads = 1;
  Spectrum s;
  if (mode == GapMode::ChainIntact) {
    s = brute_force(c.embedded.logical, opt);
    for (const auto& g : s.ground_states) {
      auto col = decode_coloring(c, g);
      if (!col || (*col)[0] == (*col)[1]) return 0.0;
    }
  } else {
    s = brute_force(c.embedded.physical, opt);
    for (const auto& g : s.ground_states) {
      auto u = unembed(c.embedded, g);
      auto col = decode_coloring(c, u.logical);
      if (u.broken_chains || !col || (*col)[0] == (*col)[1]) return 0.0;
    }
  }
  if (s.truncated || s.ground_states.size() != count_proper_colorings(parts.inst.graph, q))
    return 0.0;
  return s.gap;
}

std::vector<double> axis(double lo, double hi, int r) {
  std::vector<double> v;
  for (int k = 0; k < r; ++k) v.push_back(lo + (hi - lo) * k / (r - 1));
  return v;
}

}  // namespace

GridSearchResult grid_search_coefficients(QClass cls, int resolution) {
  if (resolution < 2) throw InvalidParameter("resolution must be >= 2");
  std::vector<ColoringCoefficients> tables;
  int q = cls == QClass::Le4 ? 4 : 8;
  if (cls == QClass::Le4) {
    auto lam = axis(0.0, 1.0, resolution);
    lam.erase(lam.begin());
    for (double A : axis(-1, 1, resolution))
      for (double B : axis(-2, 2, resolution))
        for (double C : axis(-2, 2, resolution))
          for (double l : lam)
            for (double G : axis(-1, 1, resolution)) {
              ColoringCoefficients c;
              c.A = A;
              c.B = B;
              c.C = C;
              c.lambda = l;
              c.G = G;
              tables.push_back(c);
            }
  } else {
    auto lam = axis(0.0, 1.0, resolution);
    lam.erase(lam.begin());
    for (double l : lam) {
      auto c = paper_coefficients(8);
      c.lambda = l;
      c.G = 2.0 - 2.0 * l;
      tables.push_back(c);
    }
  }
  std::vector<char> feasible(tables.size(), 0);
  std::vector<double> gaps(tables.size(), 0.0);
  GapMode mode = cls == QClass::Le4 ? GapMode::Full : GapMode::ChainIntact;
  unsigned nt = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nt; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < tables.size(); k += nt) {
        if (!within_budget(q, tables[k])) continue;
        feasible[k] = 1;
        gaps[k] = edge_gap(q, tables[k], mode);
      }
    });
  for (auto& t : pool) t.join();

  GridSearchResult out;
  out.best_gap = -1.0;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (!feasible[k]) continue;
    out.evaluated.push_back({tables[k], gaps[k]});
    if (gaps[k] > out.best_gap + 1e-9) {
      out.best_gap = gaps[k];
      out.best = tables[k];
    }
  }
  for (const auto& p : out.evaluated)
    if (std::abs(p.gap - out.best_gap) <= 1e-9) out.optimal.push_back(p.coef);
  if (out.best_gap < 0) out.best_gap = 0.0;
  return out;
}

}  // namespace qlat
