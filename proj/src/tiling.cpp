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

#include "qlat/tiling.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "qlat/errors.hpp"

namespace qlat {

int TileRole::horizontal_carrier() const {
  return kind == TileKind::Empty ? -1 : vertex;
}

int TileRole::vertical_carrier() const {
  switch (kind) {
    case TileKind::Vertex:
      return vertex;
    case TileKind::Crossing:
      return vertical;
    default:
      return -1;
  }
}

int TilePlan::crossings() const {
  return static_cast<int>(std::count_if(grid.begin(), grid.end(), [](auto& t) {
    return t.kind == TileKind::Crossing;
  }));
}

namespace {

std::string pos_str(TilePos p) {
  return "(" + std::to_string(p.r) + "," + std::to_string(p.c) + ")";
}

bool owns(const TileRole& t, int v) {
  return t.kind == TileKind::Vertex && t.vertex == v;
}

std::vector<Edge> normalized_edges(const Graph& g) {
  std::set<Edge> out;
  for (auto [u, v] : g.edges)
    if (u != v) out.emplace(std::min(u, v), std::max(u, v));
  return {out.begin(), out.end()};
}

// Adjacent pairs (p, q) with q east or south of p, in row-major order of p.
template <typename F>
void for_each_adjacent(const TilePlan& plan, F&& f) {
  for (int r = 0; r < plan.rows; ++r)
    for (int c = 0; c < plan.cols; ++c) {
      if (c + 1 < plan.cols) f(TilePos{r, c}, TilePos{r, c + 1}, true);
      if (r + 1 < plan.rows) f(TilePos{r, c}, TilePos{r + 1, c}, false);
    }
}

TilePlan compact(const TilePlan& in) {
  std::vector<int> keep_r, keep_c;
  for (int r = 0; r < in.rows; ++r) {
    bool used = false;
    for (int c = 0; c < in.cols; ++c)
      used |= in.at(r, c).kind != TileKind::Empty;
    if (used) keep_r.push_back(r);
  }
  for (int c = 0; c < in.cols; ++c) {
    bool used = false;
    for (int r = 0; r < in.rows; ++r)
      used |= in.at(r, c).kind != TileKind::Empty;
    if (used) keep_c.push_back(c);
  }
  TilePlan out;
  out.tile_side = in.tile_side;
  out.num_vertices = in.num_vertices;
  out.rows = static_cast<int>(keep_r.size());
  out.cols = static_cast<int>(keep_c.size());
  out.grid.resize(out.rows * out.cols);
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c) out.at(r, c) = in.at(keep_r[r], keep_c[c]);
  return out;
}

TilePlan blank(int rows, int cols, int n, int tile_side) {
  TilePlan p;
  p.tile_side = tile_side;
  p.rows = rows;
  p.cols = cols;
  p.num_vertices = n;
  p.grid.assign(rows * cols, TileRole::empty());
  return p;
}

std::vector<int> degree_order(const Graph& g) {
  std::vector<int> deg(g.n, 0);
  for (auto [u, v] : normalized_edges(g)) ++deg[u], ++deg[v];
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return deg[a] > deg[b]; });
  return order;
}

std::optional<TilePlan> path_plan(const Graph& g, int tile_side) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : normalized_edges(g)) adj[u].push_back(v), adj[v].push_back(u);
  for (auto& a : adj)
    if (a.size() > 2) return std::nullopt;
  std::vector<int> line;
  std::vector<char> seen(g.n, 0);
  auto walk = [&](int s) {
    int prev = -1, cur = s;
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = 1;
      line.push_back(cur);
      int next = -1;
      for (int w : adj[cur])
        if (w != prev && !seen[w]) next = w;
      prev = cur;
      cur = next;
    }
  };
  for (int v = 0; v < g.n; ++v)
    if (!seen[v] && adj[v].size() < 2) walk(v);
  for (int v = 0; v < g.n; ++v)
    if (!seen[v]) return std::nullopt;  // a cycle remains
  TilePlan p = blank(1, g.n, g.n, tile_side);
  for (int c = 0; c < g.n; ++c) p.at(0, c) = TileRole::owned(line[c]);
  return p;
}

std::optional<TilePlan> cycle_plan(const Graph& g, int tile_side) {
  auto edges = normalized_edges(g);
  if (g.n < 4 || static_cast<int>(edges.size()) != g.n) return std::nullopt;
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : edges) adj[u].push_back(v), adj[v].push_back(u);
  for (auto& a : adj)
    if (a.size() != 2) return std::nullopt;
  std::vector<int> cyc{0};
  int prev = -1, cur = 0;
  while (true) {
    int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    if (next == 0) break;
    cyc.push_back(next);
    prev = cur;
    cur = next;
  }
  if (static_cast<int>(cyc.size()) != g.n) return std::nullopt;
  int k = (g.n + 1) / 2;
  TilePlan p = blank(2, k, g.n, tile_side);
  for (int c = 0; c < k; ++c) p.at(0, c) = TileRole::owned(cyc[c]);
  for (int c = k - 1; c >= 0; --c) {
    int idx = k + (k - 1 - c);
    p.at(1, c) = TileRole::owned(cyc[std::min(idx, g.n - 1)]);
  }
  return p;
}

// Compact complete-graph plans found by exhaustive search.
const std::vector<std::vector<std::string>>& complete_patterns() {
  static const std::vector<std::vector<std::string>> kPatterns = {
      {},
      {"A"},
      {"AB"},
      {"AB", "CC"},
      {"AAC", "DBC", "DCC"},
      {"EEEA", "BA+A", "BDEC", "BCCC"},
  };
  return kPatterns;
}

std::optional<TilePlan> table_plan(const Graph& g, int tile_side) {
  const auto& pats = complete_patterns();
  if (g.n >= static_cast<int>(pats.size())) return std::nullopt;
  return plan_from_pattern(pats[g.n], g, tile_side);
}

std::tuple<int, int, int> plan_cost(const TilePlan& p) {
  return {p.rows * p.cols, p.side(), p.crossings()};
}

}  // namespace

void finish_plan(TilePlan& plan, const Graph& g) {
  plan.num_vertices = g.n;
  plan.edges.clear();
  for (auto [u, v] : normalized_edges(g)) {
    std::optional<EdgeRealization> found;
    for_each_adjacent(plan, [&](TilePos p, TilePos q, bool) {
      if (found) return;
      const auto& tp = plan.at(p);
      const auto& tq = plan.at(q);
      if (owns(tp, u) && owns(tq, v)) found = EdgeRealization{u, v, p, q};
      if (owns(tp, v) && owns(tq, u)) found = EdgeRealization{u, v, q, p};
    });
    if (!found)
      throw InfeasibleEmbedding("tile plan has no adjacent tiles for edge (" +
                                std::to_string(u) + "," + std::to_string(v) +
                                ")");
    plan.edges.push_back(*found);
  }
  plan.chain_routes.assign(g.n, {});
  for (int r = 0; r < plan.rows; ++r)
    for (int c = 0; c < plan.cols; ++c) {
      const auto& t = plan.at(r, c);
      if (t.kind == TileKind::Empty) continue;
      if (t.vertex >= 0 && t.vertex < g.n)
        plan.chain_routes[t.vertex].push_back({r, c});
      if (t.kind == TileKind::Crossing && t.vertical >= 0 && t.vertical < g.n)
        plan.chain_routes[t.vertical].push_back({r, c});
    }
}

TilePlan plan_from_pattern(std::span<const std::string> rows, const Graph& g,
                           int tile_side) {
  int R = static_cast<int>(rows.size());
  int C = R ? static_cast<int>(rows[0].size()) : 0;
  TilePlan p = blank(R, C, g.n, tile_side);
  for (int r = 0; r < R; ++r) {
    if (static_cast<int>(rows[r].size()) != C)
      throw InvalidParameter("ragged tile pattern");
    for (int c = 0; c < C; ++c) {
      char ch = rows[r][c];
      if (ch >= 'A' && ch <= 'Z') p.at(r, c) = TileRole::owned(ch - 'A');
    }
  }
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) {
      if (rows[r][c] != '+') continue;
      if (c == 0 || r == 0)
        throw InvalidParameter("crossing on the pattern border");
      p.at(r, c) = TileRole::crossing(p.at(r, c - 1).horizontal_carrier(),
                                      p.at(r - 1, c).vertical_carrier());
    }
  finish_plan(p, g);
  return p;
}

std::vector<std::string> check_plan(const TilePlan& plan, const Graph& g) {
  std::vector<std::string> problems;
  if (static_cast<int>(plan.grid.size()) != plan.rows * plan.cols) {
    problems.push_back("grid size does not match rows x cols");
    return problems;
  }
  if (plan.num_vertices != g.n) problems.push_back("vertex count mismatch");
  auto carrier = [&](int r, int c, bool horizontal) {
    if (!plan.inside(r, c)) return -1;
    const auto& t = plan.at(r, c);
    return horizontal ? t.horizontal_carrier() : t.vertical_carrier();
  };
  for (int r = 0; r < plan.rows; ++r)
    for (int c = 0; c < plan.cols; ++c) {
      const auto& t = plan.at(r, c);
      auto where = pos_str({r, c});
      if (t.kind == TileKind::Vertex && (t.vertex < 0 || t.vertex >= g.n))
        problems.push_back("unknown vertex at " + where);
      if (t.kind != TileKind::Crossing) continue;
      if (t.vertex == t.vertical || t.vertex < 0 || t.vertical < 0)
        problems.push_back("crossing at " + where + " needs two travellers");
      if (carrier(r, c - 1, true) != t.vertex ||
          carrier(r, c + 1, true) != t.vertex)
        problems.push_back("crossing at " + where +
                           " is not fed west/east by vertex " +
                           std::to_string(t.vertex));
      if (carrier(r - 1, c, false) != t.vertical ||
          carrier(r + 1, c, false) != t.vertical)
        problems.push_back("crossing at " + where +
                           " is not fed north/south by vertex " +
                           std::to_string(t.vertical));
    }
  // Connectivity along carried directions.
  for (int v = 0; v < g.n; ++v) {
    std::set<TilePos> tiles;
    bool has_vertex_tile = false;
    for (int r = 0; r < plan.rows; ++r)
      for (int c = 0; c < plan.cols; ++c) {
        if (carrier(r, c, true) == v || carrier(r, c, false) == v)
          tiles.insert({r, c});
        has_vertex_tile |= owns(plan.at(r, c), v);
      }
    if (!has_vertex_tile) {
      problems.push_back("vertex " + std::to_string(v) + " has no tile");
      continue;
    }
    std::set<TilePos> seen{*tiles.begin()};
    std::queue<TilePos> q;
    q.push(*tiles.begin());
    while (!q.empty()) {
      auto p = q.front();
      q.pop();
      const std::array<std::pair<TilePos, bool>, 4> steps = {{
          {{p.r, p.c - 1}, true},
          {{p.r, p.c + 1}, true},
          {{p.r - 1, p.c}, false},
          {{p.r + 1, p.c}, false},
      }};
      for (auto [n, horizontal] : steps) {
        if (carrier(p.r, p.c, horizontal) != v) continue;
        if (carrier(n.r, n.c, horizontal) != v) continue;
        if (seen.insert(n).second) q.push(n);
      }
    }
    if (seen.size() != tiles.size())
      problems.push_back("vertex " + std::to_string(v) +
                         " region is disconnected");
  }
  auto want = normalized_edges(g);
  std::map<Edge, int> count;
  for (const auto& e : plan.edges) {
    Edge key{std::min(e.u, e.v), std::max(e.u, e.v)};
    ++count[key];
    if (!g.has_edge(e.u, e.v))
      problems.push_back("realized non-edge (" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + ")");
    bool adjacent = std::abs(e.a.r - e.b.r) + std::abs(e.a.c - e.b.c) == 1;
    if (!adjacent || !plan.inside(e.a.r, e.a.c) ||
        !plan.inside(e.b.r, e.b.c) || !owns(plan.at(e.a), e.u) ||
        !owns(plan.at(e.b), e.v))
      problems.push_back("edge (" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + ") realized at " +
                         pos_str(e.a) + "-" + pos_str(e.b) +
                         " which are not adjacent tiles of its endpoints");
  }
  for (auto e : want)
    if (count[e] != 1)
      problems.push_back("edge (" + std::to_string(e.first) + "," +
                         std::to_string(e.second) + ") realized " +
                         std::to_string(count[e]) + " times");
  return problems;
}

TilePlan staircase_plan(const Graph& g, int tile_side) {
  const int n = g.n;
  if (n <= 2) {
    TilePlan p = blank(n ? 1 : 0, n, n, tile_side);
    for (int v = 0; v < n; ++v) p.at(0, v) = TileRole::owned(v);
    finish_plan(p, g);
    return p;
  }
  auto order = degree_order(g);
  // Positions 0 and n-1 touch everyone without crossings.
  std::vector<int> vert(n);
  vert[0] = order[0];
  vert[n - 1] = order[1];
  for (int p = 1; p + 1 < n; ++p) vert[p] = order[p + 1];
  auto adj = [&](int p, int q) { return g.has_edge(vert[p], vert[q]); };

  const int S = 2 * n - 1;
  TilePlan big = blank(S, S, n, tile_side);
  // Row p spans columns [max(2, 2p), row_end[p]]; column q spans rows
  // [col_top[q], 2q] (q = n-1: [0, last_bottom]).
  std::vector<int> row_end(n - 1), col_top(n - 1, 0);
  for (int p = 0; p + 1 < n; ++p) {
    int end = p == 0 ? 2 : 2 * p;
    for (int q = p + 1; q + 1 < n; ++q)
      if (adj(p, q)) end = std::max(end, p == 0 ? 2 * q : 2 * q - 1);
    if (adj(p, n - 1)) end = 2 * n - 3;
    row_end[p] = end;
  }
  for (int q = 1; q + 1 < n; ++q) {
    int top = 2 * q;
    for (int p = q - 1; p >= 0; --p)
      if (adj(p, q)) top = std::min(top, p == 0 ? 1 : 2 * p + 1);
    col_top[q] = top;
  }
  int last_bottom = 0;
  for (int p = 1; p + 1 < n; ++p)
    if (adj(p, n - 1)) last_bottom = 2 * p;

  for (int p = 0; p + 1 < n; ++p)
    for (int c = std::max(2, 2 * p); c <= row_end[p]; ++c)
      big.at(2 * p, c) = TileRole::owned(vert[p]);
  for (int q = 1; q + 1 < n; ++q)
    for (int r = col_top[q]; r <= 2 * q; ++r) {
      auto& t = big.at(r, 2 * q);
      if (t.kind == TileKind::Vertex && t.vertex != vert[q])
        t = TileRole::crossing(t.vertex, vert[q]);
      else
        t = TileRole::owned(vert[q]);
    }
  for (int r = 0; r <= last_bottom; ++r)
    big.at(r, 2 * n - 2) = TileRole::owned(vert[n - 1]);
  for (int p = 1; p + 1 < n; ++p)
    for (int q = p + 1; q + 1 < n; ++q)
      if (adj(p, q)) big.at(2 * p + 1, 2 * q - 1) = TileRole::owned(vert[p]);

  TilePlan out = compact(big);
  finish_plan(out, g);
  return out;
}

TilePlan route_graph_to_tiles(const Graph& g, int tile_side) {
  if (tile_side < 1) throw InvalidParameter("tile side must be positive");
  std::vector<TilePlan> candidates;
  candidates.push_back(staircase_plan(g, tile_side));
  if (auto p = path_plan(g, tile_side)) candidates.push_back(*p);
  if (auto p = cycle_plan(g, tile_side)) candidates.push_back(*p);
  if (auto p = table_plan(g, tile_side)) candidates.push_back(*p);
  auto best = std::min_element(
      candidates.begin(), candidates.end(),
      [](const TilePlan& a, const TilePlan& b) {
        return plan_cost(a) < plan_cost(b);
      });
  TilePlan out = *best;
  finish_plan(out, g);
  return out;
}

PairTemplate crossing_tile_chimera(int J) {
  if (J < 4) throw UnsupportedCell("crossing tile needs J >= 4");
  PairTemplate t;
  t.qubo = Qubo(0, Domain::Spin);
  for (int side = 0; side < 2; ++side) {
    int b = 2 * side;
    // L_b - R_b - L_{b+1} - R_{b+1}
    const std::array<int, 4> path = {b, J + b, b + 1, J + b + 1};
    int first = t.qubo.num_vars();
    for (int a : path) {
      t.qubo.add_var();
      t.sites.push_back({side, {0, 0, a, 0}});
    }
    for (int k = 0; k + 1 < 4; ++k)
      t.qubo.add_quadratic(first + k, first + k + 1, -1.0);
  }
  return t;
}

namespace {

class Stitcher {
 public:
  Stitcher(const TilePlan& plan, const TileHamiltonians& tiles,
           const LatticeSpec& lattice)
      : plan_(plan), tiles_(tiles), graph_(lattice) {
    phys_ = Qubo(0, Domain::Spin);
  }

  int lattice_vertex(TilePos tile, const TileSite& s) const {
    int l = tiles_.tile_side;
    return graph_.index(tile.c * l + s.x, tile.r * l + s.y, s.a);
  }

  int logical(int v, int bit) const { return v * tiles_.bits + bit; }

  int host(int vertex, int logical_id, const std::string& where) {
    auto it = slot_.find(vertex);
    if (it != slot_.end()) {
      if (chain_of_[it->second] != logical_id)
        throw InfeasibleEmbedding("lattice vertex " + std::to_string(vertex) +
                                  " claimed twice at " + where);
      return it->second;
    }
    int s = phys_.add_var();
    slot_[vertex] = s;
    vertex_of_.push_back(vertex);
    chain_of_.push_back(logical_id);
    return s;
  }

  int lookup(int vertex, int logical_id, const std::string& where) const {
    auto it = slot_.find(vertex);
    if (it == slot_.end() || chain_of_[it->second] != logical_id)
      throw InfeasibleEmbedding("template site not hosted at " + where);
    return it->second;
  }

  void place(const Qubo& q, const std::vector<int>& slots) {
    phys_.add_offset(q.offset());
    for (auto [v, c] : q.linear()) phys_.add_linear(slots[v], c);
    for (auto [e, c] : q.quadratic())
      phys_.add_quadratic(slots[e.first], slots[e.second], c);
  }

  void vertex_tile(TilePos p, int v) {
    const auto& t = tiles_.vertex_tile;
    std::vector<int> slots;
    for (const auto& s : t.sites)
      slots.push_back(host(lattice_vertex(p, s), logical(v, s.bit),
                           "vertex tile " + pos_str(p)));
    place(t.qubo, slots);
  }

  void crossing_tile(TilePos p, int h, int v) {
    const auto& t = tiles_.crossing;
    std::vector<int> slots;
    for (const auto& s : t.sites)
      slots.push_back(host(lattice_vertex(p, s.site),
                           logical(s.side == 0 ? h : v, s.site.bit),
                           "crossing tile " + pos_str(p)));
    place(t.qubo, slots);
  }

  void pair(const PairTemplate& t, TilePos p0, int v0, TilePos p1, int v1,
            const std::string& what) {
    std::vector<int> slots;
    for (const auto& s : t.sites) {
      TilePos p = s.side == 0 ? p0 : p1;
      int v = s.side == 0 ? v0 : v1;
      slots.push_back(lookup(lattice_vertex(p, s.site), logical(v, s.site.bit),
                             what + " " + pos_str(p0) + "-" + pos_str(p1)));
    }
    place(t.qubo, slots);
  }

  EmbeddedQubo finish(bool normalize) {
    int nl = plan_.num_vertices * tiles_.bits;
    for (auto [e, c] : phys_.quadratic()) {
      int a = vertex_of_[e.first], b = vertex_of_[e.second];
      if (!graph_.has_edge(a, b))
        throw InfeasibleEmbedding("template coupling off a lattice edge: " +
                                  std::to_string(a) + "-" + std::to_string(b));
    }
    EmbeddedQubo out;
    out.embedding.lattice = graph_.spec();
    out.embedding.chains.assign(nl, {});
    for (int s = 0; s < static_cast<int>(vertex_of_.size()); ++s)
      out.embedding.chains[chain_of_[s]].push_back(vertex_of_[s]);
    for (auto& c : out.embedding.chains) std::sort(c.begin(), c.end());
    for (int v = 0; v < plan_.num_vertices; ++v)
      for (int b = 0; b < tiles_.bits; ++b)
        out.embedding.names.push_back("v" + std::to_string(v) + "." +
                                      std::to_string(b));
    out.embedding.alpha = 1.0;
    out.logical = contract_chains(phys_, chain_of_, nl);
    out.logical.set_names(out.embedding.names);
    for (auto [e, c] : phys_.quadratic()) {
      int la = chain_of_[e.first], lb = chain_of_[e.second];
      if (la == lb) continue;
      out.placements.push_back({{std::min(la, lb), std::max(la, lb)},
                                {vertex_of_[e.first], vertex_of_[e.second]}});
    }
    out.physical = normalize ? normalize_couplings(phys_).qubo : phys_;
    out.vertex_of = vertex_of_;
    out.chain_of = chain_of_;
    return out;
  }

 private:
  const TilePlan& plan_;
  const TileHamiltonians& tiles_;
  LatticeGraph graph_;
  Qubo phys_;
  std::map<int, int> slot_;
  std::vector<int> vertex_of_;
  std::vector<int> chain_of_;
};

}  // namespace

EmbeddedQubo stitch(const TilePlan& plan, const TileHamiltonians& tiles,
                    const LatticeSpec& lattice, const StitchOptions& opt) {
  if (tiles.tile_side != plan.tile_side)
    throw InvalidParameter("tile side of plan and templates differ");
  int l = tiles.tile_side;
  if (lattice.rows < l * plan.cols || lattice.cols < l * plan.rows)
    throw InvalidParameter("lattice smaller than the tile plan: need " +
                           std::to_string(l * plan.cols) + "x" +
                           std::to_string(l * plan.rows));
  Stitcher st(plan, tiles, lattice);
  for (int r = 0; r < plan.rows; ++r)
    for (int c = 0; c < plan.cols; ++c) {
      const auto& t = plan.at(r, c);
      if (t.kind == TileKind::Vertex) st.vertex_tile({r, c}, t.vertex);
      if (t.kind == TileKind::Crossing)
        st.crossing_tile({r, c}, t.vertex, t.vertical);
    }
  for_each_adjacent(plan, [&](TilePos p, TilePos q, bool horizontal) {
    const auto& a = plan.at(p);
    const auto& b = plan.at(q);
    int va = horizontal ? a.horizontal_carrier() : a.vertical_carrier();
    int vb = horizontal ? b.horizontal_carrier() : b.vertical_carrier();
    if (va < 0 || va != vb) return;
    st.pair(horizontal ? tiles.chain_horizontal : tiles.chain_vertical, p, va,
            q, vb, "chain");
  });
  for (const auto& e : plan.edges) {
    bool a_first = e.a < e.b;
    TilePos p0 = a_first ? e.a : e.b, p1 = a_first ? e.b : e.a;
    int v0 = a_first ? e.u : e.v, v1 = a_first ? e.v : e.u;
    bool horizontal = p0.r == p1.r;
    st.pair(horizontal ? tiles.edge_horizontal : tiles.edge_vertical, p0, v0,
            p1, v1, "edge");
  }
  return st.finish(opt.normalize);
}

Qubo contract_chains(const Qubo& physical, std::span<const int> chain_of,
                     int num_logical) {
  bool spin = physical.domain() == Domain::Spin;
  Qubo out(num_logical, physical.domain());
  out.add_offset(physical.offset());
  for (auto [v, c] : physical.linear()) out.add_linear(chain_of[v], c);
  for (auto [e, c] : physical.quadratic()) {
    int a = chain_of[e.first], b = chain_of[e.second];
    if (a != b)
      out.add_quadratic(a, b, c);
    else if (spin)
      out.add_offset(c);
    else
      out.add_linear(a, c);
  }
  out.prune(1e-12);
  return out;
}

namespace {

struct Composer {
  LatticeGraph dst;

  Qubo phys{0, Domain::Binary};
  std::map<int, int> slot;
  std::vector<int> vertex_of;
  std::vector<int> chain_of;

  explicit Composer(const LatticeSpec& s) : dst(s) {}

  std::optional<int> owner(int vertex) const {
    auto it = slot.find(vertex);
    if (it == slot.end()) return std::nullopt;
    return chain_of[it->second];
  }

  int claim(int vertex, int chain) {
    if (auto o = owner(vertex)) {
      if (*o != chain)
        throw InfeasibleEmbedding("supertile vertex " + std::to_string(vertex) +
                                  " needed by two chains");
      return slot.at(vertex);
    }
    int s = phys.add_var();
    slot[vertex] = s;
    vertex_of.push_back(vertex);
    chain_of.push_back(chain);
    return s;
  }

  void penalty(int a, int b, double w) {
    // w * 2 (x_a - x_b)^2
    phys.add_linear(a, 2.0 * w);
    phys.add_linear(b, 2.0 * w);
    phys.add_quadratic(a, b, -4.0 * w);
  }

  // Grows chains cx and cy through free vertices of supertile (ci, cj) until
  // they touch, then couples the touching pair with weight c.
  bool couple(int ci, int cj, int cx, int cy, double c, double w) {
    auto in_tile = [&](int v) {
      auto k = dst.coord(v);
      return k.i / 2 == ci && k.j / 2 == cj;
    };
    auto grow = [&](int chain) {
      std::map<int, int> parent;  // vertex -> predecessor, -1 for sources
      std::queue<int> q;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int a = 0; a < dst.spec().cell.n; ++a) {
            int v = dst.index(2 * ci + i, 2 * cj + j, a);
            if (owner(v) == chain) {
              parent[v] = -1;
              q.push(v);
            }
          }
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : dst.neighbors(v))
          if (in_tile(u) && !owner(u) && !parent.count(u)) {
            parent[u] = v;
            q.push(u);
          }
      }
      return parent;
    };
    auto px = grow(cx), py = grow(cy);
    auto depth = [](const std::map<int, int>& p, int v) {
      int d = 0;
      for (int k = p.at(v); k >= 0; k = p.at(k)) ++d;
      return d;
    };
    auto path = [](const std::map<int, int>& p, int v) {
      std::vector<int> out;
      for (int k = v; k >= 0; k = p.at(k)) out.push_back(k);
      return out;
    };
    std::optional<std::tuple<int, int, int>> best;  // cost, vx, vy
    for (auto [vx, unused] : px) {
      (void)unused;
      for (int vy : dst.neighbors(vx)) {
        if (!py.count(vy) || vy == vx) continue;
        auto a = path(px, vx), b = path(py, vy);
        bool overlap = false;
        for (int v : a)
          overlap |= std::find(b.begin(), b.end(), v) != b.end();
        if (overlap) continue;
        std::tuple<int, int, int> cand{depth(px, vx) + depth(py, vy), vx, vy};
        if (!best || cand < *best) best = cand;
      }
    }
    if (!best) return false;
    auto [cost, vx, vy] = *best;
    (void)cost;
    auto extend = [&](const std::map<int, int>& p, int v, int chain) {
      auto a = path(p, v);
      for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
        int s = claim(a[k], chain);
        penalty(slot.at(a[k + 1]), s, w);
      }
      return slot.at(v);
    };
    int sx = extend(px, vx, cx);
    int sy = extend(py, vy, cy);
    phys.add_quadratic(sx, sy, c);
    return true;
  }

  // Copies e into cells (2i + di, 2j + dj), relaying cross-cell couplings
  // through the neighboring off-diagonal quadrant.
  void place(const EmbeddedQubo& e, const Qubo& bin, int di, int dj,
             int chain_base) {
    LatticeGraph src(e.embedding.lattice);
    auto map_vertex = [&](int v) {
      auto cc = src.coord(v);
      return dst.index(2 * cc.i + di, 2 * cc.j + dj, cc.a);
    };
    std::vector<int> slots(e.vertex_of.size());
    for (size_t s = 0; s < e.vertex_of.size(); ++s)
      slots[s] = claim(map_vertex(e.vertex_of[s]), chain_base + e.chain_of[s]);
    phys.add_offset(bin.offset());
    for (auto [v, c] : bin.linear()) phys.add_linear(slots[v], c);
    double alpha = std::max(1.0, e.embedding.alpha);
    std::set<std::pair<int, int>> linked;
    auto link = [&](int sa, int sb, double c) {
      auto ca = src.coord(e.vertex_of[sa]), cb = src.coord(e.vertex_of[sb]);
      if (ca.i == cb.i && ca.j == cb.j) {
        phys.add_quadratic(slots[sa], slots[sb], c);
        return;
      }
      if (std::tie(ca.i, ca.j) > std::tie(cb.i, cb.j)) {
        std::swap(sa, sb);
        std::swap(ca, cb);
      }
      // Relay cell between the two images, same cell index as the source.
      int ri = 2 * ca.i + di + (cb.i - ca.i);
      int rj = 2 * ca.j + dj + (cb.j - ca.j);
      int relay = claim(dst.index(ri, rj, ca.a), chain_of[slots[sa]]);
      if (linked.insert({slots[sa], relay}).second)
        penalty(slots[sa], relay, std::max(alpha, std::abs(c)));
      if (c != 0.0) phys.add_quadratic(relay, slots[sb], c);
    };
    for (auto [pq, c] : bin.quadratic()) link(pq.first, pq.second, c);
    // Chain links without a coefficient still need a relay for connectivity.
    for (size_t a = 0; a < e.vertex_of.size(); ++a)
      for (int w : src.neighbors(e.vertex_of[a])) {
        int b = e.slot(w);
        if (b < 0 || b <= static_cast<int>(a)) continue;
        if (e.chain_of[a] != e.chain_of[b]) continue;
        if (bin.quad(static_cast<int>(a), b) != 0.0) continue;
        link(static_cast<int>(a), b, 0.0);
      }
  }
};

}  // namespace

EmbeddedQubo transpose_embedded(const EmbeddedQubo& e) {
  const auto& spec = e.embedding.lattice;
  const int J = spec.cell.chimera_J;
  if (J == 0) throw UnsupportedCell("transpose needs a Chimera cell");
  LatticeGraph src(spec);
  LatticeSpec t(spec.cell, spec.cols, spec.rows);
  LatticeGraph dst(t);
  auto map = [&](int v) {
    auto c = src.coord(v);
    return dst.index(c.j, c.i, c.a < J ? c.a + J : c.a - J);
  };
  EmbeddedQubo out = e;
  out.embedding.lattice = t;
  for (auto& v : out.vertex_of) v = map(v);
  for (auto& ch : out.embedding.chains) {
    for (auto& v : ch) v = map(v);
    std::sort(ch.begin(), ch.end());
  }
  for (auto& p : out.placements)
    p.physical = {map(p.physical.first), map(p.physical.second)};
  return out;
}

EmbeddedQubo supertile_compose(const EmbeddedQubo& first,
                               const EmbeddedQubo& second,
                               std::span<const SupertileCoupling> couplings) {
  const auto& l1 = first.embedding.lattice;
  const auto& l2 = second.embedding.lattice;
  if (!(l1.cell == l2.cell) || l1.cell.chimera_J == 0)
    throw InvalidParameter("supertiles need matching Chimera cells");
  int L = std::max({l1.rows, l1.cols, l2.rows, l2.cols});
  LatticeSpec spec(l1.cell, 2 * L);
  Composer comp(spec);
  int n1 = first.embedding.num_logical();
  int n2 = second.embedding.num_logical();
  comp.place(first, to_binary(first.physical), 0, 0, 0);
  comp.place(second, to_binary(second.physical), 1, 1, n1);

  Qubo logical(n1 + n2, Domain::Binary);
  Qubo lb1 = to_binary(first.logical), lb2 = to_binary(second.logical);
  logical.add(lb1);
  logical.add_offset(lb2.offset());
  for (auto [v, c] : lb2.linear()) logical.add_linear(n1 + v, c);
  for (auto [e, c] : lb2.quadratic())
    logical.add_quadratic(n1 + e.first, n1 + e.second, c);

  LatticeGraph g1(l1), g2(l2);
  const double w8 = std::max({1.0, first.embedding.alpha, second.embedding.alpha});
  for (const auto& cp : couplings) {
    if (cp.i < 0 || cp.i >= n1 || cp.j < 0 || cp.j >= n2)
      throw InvalidParameter("supertile coupling index out of range");
    const int cx = cp.i, cy = n1 + cp.j;
    std::set<std::pair<int, int>> shared;
    std::set<std::pair<int, int>> cells_x;
    for (int u : first.embedding.chains[cp.i]) {
      auto c = g1.coord(u);
      cells_x.insert({c.i, c.j});
    }
    for (int w : second.embedding.chains[cp.j]) {
      auto c = g2.coord(w);
      if (cells_x.count({c.i, c.j})) shared.insert({c.i, c.j});
    }
    bool done = false;
    for (auto [ci, cj] : shared) {
      if (comp.couple(ci, cj, cx, cy, cp.weight, std::max(w8, std::abs(cp.weight)))) {
        logical.add_quadratic(cx, cy, cp.weight);
        done = true;
        break;
      }
    }
    if (!done)
      throw InfeasibleEmbedding("no shared supertile position for coupling " +
                                std::to_string(cp.i));
  }

  EmbeddedQubo out;
  out.physical = comp.phys;
  out.vertex_of = comp.vertex_of;
  out.chain_of = comp.chain_of;
  out.embedding.lattice = spec;
  out.embedding.chains.assign(n1 + n2, {});
  for (size_t s = 0; s < comp.vertex_of.size(); ++s)
    out.embedding.chains[comp.chain_of[s]].push_back(comp.vertex_of[s]);
  for (auto& c : out.embedding.chains) std::sort(c.begin(), c.end());
  out.embedding.alpha = std::max(first.embedding.alpha, second.embedding.alpha);
  out.logical = logical;
  for (auto [e, c] : out.physical.quadratic()) {
    int a = out.chain_of[e.first], b = out.chain_of[e.second];
    if (a != b)
      out.placements.push_back(
          {{std::min(a, b), std::max(a, b)},
           {out.vertex_of[e.first], out.vertex_of[e.second]}});
  }
  return out;
}

}  // namespace qlat
