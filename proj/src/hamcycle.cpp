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

#include "qlat/hamcycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <string>

#include "line_grid.hpp"
#include "qlat/unary.hpp"

namespace qlat {

using detail::Axis;
using detail::LineGrid;

namespace {

void require_cycle_size(int N, const char* what) {
  if (N < 3)
    throw InvalidParameter(std::string(what) +
                           ": N < 3 admits no Hamiltonian cycle");
}

std::string xname(int v, int j) {
  return "x" + std::to_string(v) + "," + std::to_string(j);
}

void add_position_terms(Qubo& q, int N, bool per_vertex, bool per_position) {
  std::vector<std::pair<int, double>> t;
  for (int a = 0; a < N; ++a) {
    if (per_vertex) {
      t.clear();
      for (int j = 0; j < N; ++j) t.emplace_back(a * N + j, 1.0);
      q.add_square(1.0, -1.0, t);
    }
    if (per_position) {
      t.clear();
      for (int v = 0; v < N; ++v) t.emplace_back(v * N + a, 1.0);
      q.add_square(1.0, -1.0, t);
    }
  }
}

struct Dir {
  int dx = 0;
  int dy = 0;
  bool operator==(const Dir&) const = default;
};

constexpr std::array<Dir, 4> kDirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

// Each subtile of a 2x2 block receives neighbour copies on one outer side:
// NW from above, NE from the right, SE from below, SW from the left.
Dir receive_side(int X, int Y) {
  const int dx = X & 1, dy = Y & 1;
  if (!dx && !dy) return {0, -1};
  if (dx && !dy) return {1, 0};
  if (dx && dy) return {0, 1};
  return {-1, 0};
}

}  // namespace

ICQubo build_ic_qubo(const HamcycleInstance& inst) {
  const int N = inst.N();
  require_cycle_size(N, "build_ic_qubo");
  ICQubo r{N, Qubo(N * N, Domain::Binary)};
  std::vector<std::string> names;
  for (int v = 0; v < N; ++v)
    for (int j = 0; j < N; ++j) names.push_back(xname(v, j));
  r.qubo.set_names(std::move(names));
  add_position_terms(r.qubo, N, true, true);
  for (int u = 0; u < N; ++u)
    for (int v = 0; v < N; ++v) {
      if (u == v || inst.graph.has_edge(u, v)) continue;
      for (int j = 0; j < N; ++j)
        r.qubo.add_quadratic(r.x(u, j), r.x(v, (j + 1) % N), 1.0);
    }
  return r;
}

std::vector<std::vector<int>> hamiltonian_cycles(const Graph& g) {
  std::vector<std::vector<int>> out;
  const int N = g.n;
  if (N < 3) return out;
  std::vector<int> path{0};
  std::vector<bool> used(N, false);
  used[0] = true;
  std::function<void()> dfs = [&] {
    if (static_cast<int>(path.size()) == N) {
      if (g.has_edge(path.back(), 0)) out.push_back(path);
      return;
    }
    for (int u = 1; u < N; ++u) {
      if (used[u] || !g.has_edge(path.back(), u)) continue;
      used[u] = true;
      path.push_back(u);
      dfs();
      path.pop_back();
      used[u] = false;
    }
  };
  dfs();
  return out;
}

CycleDecode decode_cycle(std::span<const int> solution,
                         const HamcycleInstance& inst) {
  const int N = inst.N();
  CycleDecode r;
  if (static_cast<int>(solution.size()) < N * N) {
    r.failure = "solution has " + std::to_string(solution.size()) +
                " values, need " + std::to_string(N * N);
    return r;
  }
  std::vector<int> at(N, -1);
  for (int v = 0; v < N; ++v) {
    int count = 0, pos = -1;
    for (int j = 0; j < N; ++j)
      if (solution[v * N + j]) ++count, pos = j;
    if (count != 1) {
      r.failure = "bijectivity: vertex " + std::to_string(v) + " has " +
                  std::to_string(count) + " positions";
      return r;
    }
    if (at[pos] >= 0) {
      r.failure = "bijectivity: position " + std::to_string(pos) +
                  " holds vertices " + std::to_string(at[pos]) + " and " +
                  std::to_string(v);
      return r;
    }
    at[pos] = v;
  }
  for (int j = 0; j < N; ++j) {
    const int a = at[j], b = at[(j + 1) % N];
    if (!inst.graph.has_edge(a, b)) {
      r.failure = "edge: (" + std::to_string(a) + "," + std::to_string(b) +
                  ") missing between positions " + std::to_string(j) +
                  " and " + std::to_string((j + 1) % N);
      return r;
    }
  }
  r.cycle = std::move(at);
  return r;
}

double and_gadget(int z, int x, int y) {
  return 0.5 * (4 * z + 2 * x * y - 3 * z * (x + y));
}

void add_and_gadget(Qubo& binary, int z, int x, int y) {
  binary.add_linear(z, 2.0);
  binary.add_quadratic(x, y, 1.0);
  binary.add_quadratic(z, x, -1.5);
  binary.add_quadratic(z, y, -1.5);
}

TileHamcycleQubo build_tileable_hamcycle(const HamcycleInstance& inst) {
  const Graph& g = inst.graph;
  const int N = g.n;
  require_cycle_size(N, "build_tileable_hamcycle");
  TileHamcycleQubo t;
  t.N = N;
  t.plan = route_graph_to_tiles(g);
  const TilePlan& p = t.plan;
  t.subtiles_x = 2 * p.cols;
  t.subtiles_y = 2 * p.rows;
  // Lines per subtile: N position bits, N neighbour copies, N+1 edge
  // selectors, 4 for the partial-sum tree.
  t.lines = 3 * N + 5;
  const int kPort = N, kZ = 2 * N, kTree = 3 * N + 1;
  LineGrid grid(t.subtiles_x, t.subtiles_y, t.lines);
  Qubo& q = t.qubo;
  q = Qubo(0, Domain::Binary);
  for (int v = 0; v < N; ++v)
    for (int j = 0; j < N; ++j) q.add_var(xname(v, j));

  const auto role = [&](int X, int Y) -> const TileRole& {
    return p.at(Y / 2, X / 2);
  };
  const auto owned_by = [&](int X, int Y) {
    if (X < 0 || Y < 0 || X >= t.subtiles_x || Y >= t.subtiles_y) return -1;
    const auto& r = role(X, Y);
    return r.kind == TileKind::Vertex ? r.vertex : -1;
  };

  for (int X = 0; X < t.subtiles_x; ++X)
    for (int Y = 0; Y < t.subtiles_y; ++Y) {
      const auto& r = role(X, Y);
      for (int j = 0; j < N; ++j) {
        if (r.kind == TileKind::Vertex) {
          grid.cross(X, Y, j, t.x(r.vertex, j));
        } else if (r.kind == TileKind::Crossing) {
          grid.claim(X, Y, Axis::Row, j, t.x(r.horizontal_carrier(), j));
          grid.claim(X, Y, Axis::Col, j, t.x(r.vertical_carrier(), j));
        }
      }
    }

  add_position_terms(q, N, true, false);

  struct ZSite {
    int X, Y, z;
  };
  std::vector<std::vector<ZSite>> zsites(N);
  for (const auto& e : p.edges) {
    const Dir d{e.b.c - e.a.c, e.b.r - e.a.r};
    const Axis axis = d.dx != 0 ? Axis::Row : Axis::Col;
    for (int k = 0; k < 2; ++k) {
      const int ax = 2 * e.a.c + (d.dx == 1 ? 1 : d.dx == -1 ? 0 : k);
      const int ay = 2 * e.a.r + (d.dy == 1 ? 1 : d.dy == -1 ? 0 : k);
      const int bx = ax + d.dx, by = ay + d.dy;
      int rx = ax, ry = ay, sx = bx, sy = by;
      if (receive_side(ax, ay) != d) {
        std::swap(rx, sx);
        std::swap(ry, sy);
      }
      const int wr = owned_by(rx, ry), ws = owned_by(sx, sy);
      for (int i = 0; i < N; ++i) {
        grid.claim(sx, sy, axis, kPort + i, t.x(ws, i));
        grid.claim(rx, ry, axis, kPort + i, t.x(ws, i));
      }
      const std::string tag = std::to_string(wr) + "," + std::to_string(ws);
      const int z = q.add_var("z" + tag);
      grid.cross(rx, ry, kZ, z);
      std::vector<int> steps;
      std::vector<std::pair<int, double>> sum{{z, 1.0}};
      for (int j = 0; j < N; ++j) {
        const int zj = q.add_var("z" + tag + "," + std::to_string(j));
        grid.cross(rx, ry, kZ + 1 + j, zj);
        steps.push_back(zj);
        sum.emplace_back(zj, -1.0);
        add_and_gadget(q, zj, t.x(wr, j), t.x(ws, (j + 1) % N));
      }
      q.add_square(1.0, 0.0, sum);
      t.z_edge[{wr, ws}] = z;
      t.z_step[{wr, ws}] = std::move(steps);
      zsites[wr].push_back({rx, ry, z});
    }
  }

  t.tree.assign(N, {});
  t.tree_block.assign(N, Qubo(0, Domain::Binary));
  for (int v = 0; v < N; ++v) {
    Qubo& block = t.tree_block[v];
    if (zsites[v].empty()) {
      q.add_offset(1.0);
      block.add_offset(1.0);
      continue;
    }
    // Neighbouring subtiles of v, stepping straight through crossings that
    // carry v along the step direction.
    const auto step = [&](int X, int Y, Dir d) -> std::optional<std::array<int, 2>> {
      X += d.dx;
      Y += d.dy;
      while (X >= 0 && Y >= 0 && X < t.subtiles_x && Y < t.subtiles_y) {
        const auto& r = role(X, Y);
        if (r.kind == TileKind::Vertex) {
          if (r.vertex == v) return std::array<int, 2>{X, Y};
          return std::nullopt;
        }
        if (r.kind != TileKind::Crossing) return std::nullopt;
        const int carrier =
            d.dx != 0 ? r.horizontal_carrier() : r.vertical_carrier();
        if (carrier != v) return std::nullopt;
        X += d.dx;
        Y += d.dy;
      }
      return std::nullopt;
    };
    const int W = t.subtiles_x;
    std::map<int, int> zat;
    for (const auto& s : zsites[v]) zat[s.Y * W + s.X] = s.z;
    const int root = zsites[v].front().Y * W + zsites[v].front().X;
    std::map<int, int> parent{{root, -1}};
    std::vector<int> order{root};
    for (std::size_t h = 0; h < order.size(); ++h) {
      const int X = order[h] % W, Y = order[h] / W;
      for (Dir d : kDirs)
        if (auto n = step(X, Y, d)) {
          const int id = (*n)[1] * W + (*n)[0];
          if (parent.count(id)) continue;
          parent[id] = order[h];
          order.push_back(id);
        }
    }
    std::map<int, bool> keep;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      keep[*it] = keep[*it] || zat.count(*it);
      if (keep[*it] && parent[*it] >= 0) keep[parent[*it]] = true;
    }
    auto& nodes = t.tree[v];
    std::map<int, int> index;
    for (int id : order) {
      if (!keep[id]) continue;
      HamTreeNode n;
      n.X = id % W;
      n.Y = id / W;
      n.var = q.add_var("s" + std::to_string(v) + "." +
                        std::to_string(nodes.size()));
      if (auto it = zat.find(id); it != zat.end()) n.z = it->second;
      if (parent[id] >= 0) {
        n.parent = index.at(parent[id]);
        nodes[n.parent].children.push_back(static_cast<int>(nodes.size()));
      }
      index[id] = static_cast<int>(nodes.size());
      grid.cross(n.X, n.Y, kTree, n.var);
      nodes.push_back(n);
    }
    for (const auto& c : nodes) {
      if (c.parent < 0) continue;
      const auto& par = nodes[c.parent];
      const Dir d{(par.X > c.X) - (par.X < c.X), (par.Y > c.Y) - (par.Y < c.Y)};
      Axis axis;
      int k;
      if (d.dx != 0) {
        axis = Axis::Row;
        k = kTree + 2 + ((c.X + (d.dx < 0)) & 1);
      } else {
        axis = Axis::Col;
        k = kTree + 2 + ((c.Y + (d.dy < 0)) & 1);
      }
      for (int X = c.X, Y = c.Y;; X += d.dx, Y += d.dy) {
        grid.claim(X, Y, axis, k, c.var);
        if (X == par.X && Y == par.Y) break;
      }
    }
    for (const auto& n : nodes) {
      std::optional<int> left, right, up, down;
      for (int ci : n.children) {
        const auto& c = nodes[ci];
        if (c.X < n.X) left = c.var;
        if (c.X > n.X) right = c.var;
        if (c.Y < n.Y) up = c.var;
        if (c.Y > n.Y) down = c.var;
      }
      if (left && right) grid.claim(n.X, n.Y, Axis::Col, kTree + 1, *left);
      if (up && down) grid.claim(n.X, n.Y, Axis::Row, kTree + 1, *up);
      std::vector<std::pair<int, double>> sum{{n.var, 1.0}};
      if (n.z >= 0) sum.emplace_back(n.z, -1.0);
      for (int ci : n.children) sum.emplace_back(nodes[ci].var, -1.0);
      q.add_square(1.0, 0.0, sum);
      block.add_square(1.0, 0.0, sum);
    }
    const std::pair<int, double> root_term{nodes.front().var, 1.0};
    q.add_square(1.0, -1.0, std::span(&root_term, 1));
    block.add_square(1.0, -1.0, std::span(&root_term, 1));
  }

  for (auto& b : t.tree_block) b.resize(q.num_vars());
  for (int X = 0; X < t.subtiles_x; ++X)
    for (int Y = 0; Y < t.subtiles_y; ++Y)
      for (int k = 0; k < t.lines; ++k)
        for (Axis a : {Axis::Row, Axis::Col})
          if (int o = grid.owner(X, Y, a, k); o >= 0)
            t.claims.push_back({X, Y, a == Axis::Row, k, o});
  return t;
}

Assignment tileable_hamcycle_state(const TileHamcycleQubo& t,
                                   std::span<const int> cycle) {
  const int N = t.N;
  if (static_cast<int>(cycle.size()) != N)
    throw InvalidParameter("tileable_hamcycle_state: cycle length != N");
  Assignment a(t.qubo.num_vars(), 0);
  for (int j = 0; j < N; ++j) a[t.x(cycle[j], j)] = 1;
  for (const auto& [key, steps] : t.z_step) {
    const auto [v, u] = key;
    int any = 0;
    for (int j = 0; j < N; ++j) {
      a[steps[j]] = a[t.x(v, j)] & a[t.x(u, (j + 1) % N)];
      any |= a[steps[j]];
    }
    a[t.z_edge.at(key)] = any;
  }
  for (const auto& nodes : t.tree)
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
      int s = it->z >= 0 ? a[it->z] : 0;
      for (int c : it->children) s += a[nodes[c].var];
      a[it->var] = s;
    }
  return a;
}

EmbeddedQubo embed_tileable_hamcycle(const TileHamcycleQubo& t, int J) {
  if (J < 1) throw InvalidParameter("embed_tileable_hamcycle: J < 1");
  LineGrid grid(t.subtiles_x, t.subtiles_y, t.lines);
  for (const auto& c : t.claims)
    grid.claim(c.X, c.Y, c.row ? Axis::Row : Axis::Col, c.k, c.var);
  MinorEmbedding e = grid.realize(J, t.qubo.num_vars());
  e.names = t.qubo.var_names();
  return embed_qubo(t.qubo, e);
}

EmbeddedQubo embed_tileable_hamcycle(const HamcycleInstance& inst, int J) {
  return embed_tileable_hamcycle(build_tileable_hamcycle(inst), J);
}

EmbeddedQubo embed_permutation_tree(int N, int J, int max_side) {
  if (N < 1) throw InvalidParameter("embed_permutation_tree: N < 1");
  if (J < 1) throw InvalidParameter("embed_permutation_tree: J < 1");
  int m = 0;
  while ((1 << m) * (1 << m) < N) ++m;
  const int s = 1 << m;
  LineGrid grid(2 * s - 1, 2 * s - 1, 2 * N);
  if (max_side > 0 && grid.side(J) > max_side)
    throw InvalidParameter("embed_permutation_tree: lattice too small, "
                           "requires L=" + std::to_string(grid.side(J)));
  Qubo q(0, Domain::Binary);
  for (int v = 0; v < N; ++v)
    for (int j = 0; j < N; ++j) q.add_var(xname(v, j));
  add_position_terms(q, N, true, false);

  struct Out {
    std::vector<int> var;  // per position, empty if the subtree is empty
    int X = 0, Y = 0;
  };
  // Node covering leaves a in [a0, a0+2^ka), b in [b0, b0+2^kb). Its output
  // lines use indices offset + j on the axis of the parent merge.
  std::function<Out(int, int, int, int, int)> build =
      [&](int ka, int kb, int a0, int b0, int offset) -> Out {
    Out o;
    o.X = ka == 0 ? 2 * a0 : 2 * a0 + (1 << ka) - 1;
    o.Y = kb == 0 ? 2 * b0 : 2 * b0 + (1 << kb) - 1;
    if (ka == 0 && kb == 0) {
      const int v = b0 * s + a0;
      if (v >= N) return o;
      for (int j = 0; j < N; ++j) {
        const int x = v * N + j;
        grid.cross(o.X, o.Y, j, x);
        grid.claim(o.X, o.Y, Axis::Row, offset + j, x);
        o.var.push_back(x);
      }
      return o;
    }
    const bool horizontal = ka == kb + 1;
    const Axis in = horizontal ? Axis::Row : Axis::Col;
    const Axis out = horizontal ? Axis::Col : Axis::Row;
    Out c0, c1;
    if (horizontal) {
      c0 = build(ka - 1, kb, a0, b0, 0);
      c1 = build(ka - 1, kb, a0 + (1 << (ka - 1)), b0, N);
    } else {
      c0 = build(ka, kb - 1, a0, b0, 0);
      c1 = build(ka, kb - 1, a0, b0 + (1 << (kb - 1)), N);
    }
    const auto run = [&](const Out& c, int base) {
      const int dx = (o.X > c.X) - (o.X < c.X), dy = (o.Y > c.Y) - (o.Y < c.Y);
      for (int j = 0; j < N; ++j)
        for (int X = c.X + dx, Y = c.Y + dy;; X += dx, Y += dy) {
          grid.claim(X, Y, in, base + j, c.var[j]);
          if (X == o.X && Y == o.Y) break;
        }
    };
    if (!c0.var.empty()) run(c0, 0);
    if (!c1.var.empty()) run(c1, N);
    if (c0.var.empty() && c1.var.empty()) return o;
    if (c0.var.empty() || c1.var.empty()) {
      o.var = c0.var.empty() ? c1.var : c0.var;
      for (int j = 0; j < N; ++j)
        grid.claim(o.X, o.Y, out, offset + j, o.var[j]);
      return o;
    }
    const std::string tag =
        std::to_string(o.X) + "." + std::to_string(o.Y) + ",";
    for (int j = 0; j < N; ++j) {
      const int pv = q.add_var("p" + tag + std::to_string(j));
      const int wv = q.add_var("w" + tag + std::to_string(j));
      grid.claim(o.X, o.Y, out, offset + j, pv);
      grid.claim(o.X, o.Y, out, (N - offset) + j, wv);
      add_sum_gadget(q, pv, wv, c0.var[j], c1.var[j]);
      o.var.push_back(pv);
    }
    return o;
  };
  const Out top = build(m, m, 0, 0, 0);
  for (int r : top.var) {
    const std::pair<int, double> term{r, 1.0};
    q.add_square(1.0, -1.0, std::span(&term, 1));
  }
  MinorEmbedding e = grid.realize(J, q.num_vars());
  e.names = q.var_names();
  return embed_qubo(q, e);
}

double tileable_hamcycle_estimate(int N, int L_G) {
  return L_G / 4.0 * 9.0 * (N + 1);
}

double tileable_hamcycle_bound(int N, int L_G) {
  return L_G / 2.0 * (3.0 * N + 5.0);
}

int tileable_hamcycle_side(int N, int L_G, int J) {
  return 2 * L_G * ((3 * N + 5 + J - 1) / J);
}

double complete_hamcycle_length(int N) {
  return 0.25 * static_cast<double>(N) * N;
}

double permutation_tree_length(int N) {
  return N / 2.0 * (2.0 * std::sqrt(static_cast<double>(N)) - 1.0);
}

int permutation_tree_side(int N, int J) {
  int m = 0;
  while ((1 << m) * (1 << m) < N) ++m;
  return (2 * (1 << m) - 1) * ((2 * N + J - 1) / J);
}

}  // namespace qlat
