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

#include "qlat/unary.hpp"

#include <algorithm>
#include <cmath>

namespace qlat {

namespace {

int ceil_log2(int N) {
  int n = 0;
  while ((1 << n) < N) ++n;
  return n;
}

void add_sum(Qubo& q, double constant, std::initializer_list<std::pair<int, double>> t) {
  const std::vector<std::pair<int, double>> terms(t);
  q.add_square(1.0, constant, terms);
}

}  // namespace

UnaryTreeQubo build_unary_qubo(int N, bool allow_zero, int depth_at_least) {
  if (N < 2) throw InvalidParameter("build_unary_qubo: N must be >= 2");
  UnaryTreeQubo t;
  t.N = N;
  t.n = std::max(ceil_log2(N), depth_at_least);
  const int leaves = 1 << t.n;
  for (int k = 1; k <= leaves; ++k)
    t.leaf_index.push_back(t.qubo.add_var("x" + std::to_string(k)));
  t.ancilla.resize(t.n);
  for (int j = 1; j < t.n; ++j)
    for (int k = 1; k <= (1 << j); ++k)
      t.ancilla[j].push_back(
          t.qubo.add_var("y" + std::to_string(j) + "_" + std::to_string(k)));
  if (allow_zero) t.slack = t.qubo.add_var("y");
  // Children of level-j node k (1-based) at level j+1; leaves are level n.
  auto node = [&](int j, int k) {
    return j == t.n ? t.leaf_index[k - 1] : t.ancilla[j][k - 1];
  };
  const double root_c = allow_zero ? 0.0 : -1.0;
  if (allow_zero) {
    add_sum(t.qubo, root_c,
            {{*t.slack, 1.0}, {node(1, 1), -1.0}, {node(1, 2), -1.0}});
  } else {
    add_sum(t.qubo, root_c, {{node(1, 1), 1.0}, {node(1, 2), 1.0}});
  }
  for (int j = 1; j < t.n; ++j)
    for (int k = 1; k <= (1 << j); ++k)
      add_sum(t.qubo, 0.0,
              {{node(j, k), 1.0}, {node(j + 1, 2 * k - 1), -1.0},
               {node(j + 1, 2 * k), -1.0}});
  for (int k = N + 1; k <= leaves; ++k) t.qubo.add_linear(t.leaf_index[k - 1], 1.0);
  return t;
}

Qubo k22_gadget(int z, int x, int y, int w, int num_vars) {
  Qubo q(std::max({num_vars, z + 1, x + 1, y + 1, w + 1}), Domain::Spin);
  q.add_linear(x, 1.0);
  q.add_linear(y, 1.0);
  q.add_linear(z, -1.0);
  q.add_quadratic(z, x, -1.0);
  q.add_quadratic(z, y, -1.0);
  q.add_quadratic(w, x, 1.0);
  q.add_quadratic(w, y, -1.0);
  return q;
}

void add_sum_gadget(Qubo& binary, int parent, int anc, int a, int b) {
  Qubo g = to_binary(k22_gadget(parent, a, b, anc, binary.num_vars()));
  g.add_offset(-kGadgetMinimum);
  g.prune();
  binary.add(g);
}

namespace {

struct Builder {
  int J;
  int L;
  LatticeGraph graph;
  Qubo logical{0, Domain::Binary};
  std::vector<std::vector<int>> chains;
  std::vector<int> owner;
  std::vector<int> leaves;
  FractalLayout layout;
  int leaf_counter = 0;
  int node_counter = 0;

  Builder(int j, int l) : J(j), L(l), graph(chimera_spec(j, l)) {
    owner.assign(graph.num_vertices(), -1);
  }

  int vertex(int i, int j, Side s, int index) const {
    return graph.index(i, j, s == Side::Left ? index : J + index);
  }

  int var(const std::string& name) {
    const int id = logical.add_var(name);
    chains.emplace_back();
    return id;
  }

  void place(int v, int i, int j, Side s, int index) {
    const int p = vertex(i, j, s, index);
    if (owner[p] >= 0 && owner[p] != v)
      throw InvalidParameter("fractal layout: vertex collision");
    if (owner[p] == v) return;
    owner[p] = v;
    chains[v].push_back(p);
    layout.roles.push_back({i, j, s, index, logical.name(v)});
  }

  void run_h(int v, int i_from, int i_to, int j, int index) {
    const int step = i_to >= i_from ? 1 : -1;
    for (int i = i_from;; i += step) {
      place(v, i, j, Side::Left, index);
      if (i == i_to) break;
    }
  }

  void run_v(int v, int i, int j_from, int j_to, int index) {
    const int step = j_to >= j_from ? 1 : -1;
    for (int j = j_from;; j += step) {
      place(v, i, j, Side::Right, index);
      if (j == j_to) break;
    }
  }

  std::string next_node() { return "y" + std::to_string(++node_counter); }

  struct Outputs {
    int h;
    int v;
  };

  static std::array<int, 3> others(int used) {
    std::array<int, 3> r{};
    int k = 0;
    for (int a = 0; a < 4; ++a)
      if (a != used) r[k++] = a;
    return r;
  }

  Outputs leaf_cell(int i, int j, int lh, int rv) {
    layout.leaf_cell_coords.push_back({i, j});
    const auto lo = others(lh);
    const auto ro = others(rv);
    std::array<int, 4> x{};
    for (auto& id : x) {
      id = var("x" + std::to_string(++leaf_counter));
      leaves.push_back(id);
    }
    const int z1 = var(next_node()), w1 = var("w" + logical.name(z1).substr(1));
    const int z2 = var(next_node()), w2 = var("w" + logical.name(z2).substr(1));
    place(z1, i, j, Side::Left, lh);
    place(w1, i, j, Side::Left, lo[0]);
    place(x[2], i, j, Side::Left, lo[1]);
    place(x[3], i, j, Side::Left, lo[2]);
    place(z2, i, j, Side::Right, rv);
    place(w2, i, j, Side::Right, ro[0]);
    place(x[0], i, j, Side::Right, ro[1]);
    place(x[1], i, j, Side::Right, ro[2]);
    add_sum_gadget(logical, z1, w1, x[0], x[1]);
    add_sum_gadget(logical, z2, w2, x[2], x[3]);
    for (int id : {z1, z2, x[0], x[1], x[2], x[3]})
      layout.node_cell[logical.name(id)] = {i, j};
    return {z1, z2};
  }

  // Block of side 2^(k+1) - 1 at (i0, j0). Non-top outputs are extended to
  // the block edge facing (h_dir, v_dir).
  Outputs block(int k, int i0, int j0, int lh, int rv, int h_dir, int v_dir,
                bool top) {
    if (k == 0) {
      auto out = leaf_cell(i0, j0, lh, rv);
      if (top) root(out);
      return out;
    }
    const int s = (1 << k) - 1;  // quadrant side
    const int c = (s - 1) / 2;
    const int X = i0 + s, Y = j0 + s;
    const int la = 0, lb = 1, ra = 0, rb = 1;
    const auto q00 = block(k - 1, i0, j0, la, ra, +1, +1, false);
    const auto q10 = block(k - 1, X + 1, j0, lb, ra, -1, +1, false);
    const auto q01 = block(k - 1, i0, Y + 1, la, rb, +1, -1, false);
    const auto q11 = block(k - 1, X + 1, Y + 1, lb, rb, -1, -1, false);

    const auto lo = others(lh);  // Q_left, Q_right, center ancilla
    const auto ro = others(rv);  // P_top, P_bot, center ancilla

    auto merge_h = [&](int a, int b, int jg, int r_out) {
      place(a, X, jg, Side::Left, la);
      place(b, X, jg, Side::Left, lb);
      const int p = var(next_node());
      const int w = var("w" + logical.name(p).substr(1));
      place(p, X, jg, Side::Right, r_out);
      place(w, X, jg, Side::Right, ro[2]);
      add_sum_gadget(logical, p, w, a, b);
      layout.node_cell[logical.name(p)] = {X, jg};
      return p;
    };
    auto merge_v = [&](int a, int b, int ig, int l_out) {
      place(a, ig, Y, Side::Right, ra);
      place(b, ig, Y, Side::Right, rb);
      const int p = var(next_node());
      const int w = var("w" + logical.name(p).substr(1));
      place(p, ig, Y, Side::Left, l_out);
      place(w, ig, Y, Side::Left, lo[2]);
      add_sum_gadget(logical, p, w, a, b);
      layout.node_cell[logical.name(p)] = {ig, Y};
      return p;
    };

    const int p_top = merge_h(q00.h, q10.h, j0 + c, ro[0]);
    const int p_bot = merge_h(q01.h, q11.h, Y + 1 + c, ro[1]);
    const int q_left = merge_v(q00.v, q01.v, i0 + c, lo[0]);
    const int q_right = merge_v(q10.v, q11.v, X + 1 + c, lo[1]);
    run_v(p_top, X, j0 + c, Y, ro[0]);
    run_v(p_bot, X, Y + 1 + c, Y, ro[1]);
    run_h(q_left, i0 + c, X, Y, lo[0]);
    run_h(q_right, X + 1 + c, X, Y, lo[1]);

    const int H = var(next_node()), wa = var("w" + logical.name(H).substr(1));
    const int V = var(next_node()), wb = var("w" + logical.name(V).substr(1));
    place(H, X, Y, Side::Left, lh);
    place(wa, X, Y, Side::Left, lo[2]);
    place(V, X, Y, Side::Right, rv);
    place(wb, X, Y, Side::Right, ro[2]);
    add_sum_gadget(logical, H, wa, p_top, p_bot);
    add_sum_gadget(logical, V, wb, q_left, q_right);
    layout.node_cell[logical.name(H)] = {X, Y};
    layout.node_cell[logical.name(V)] = {X, Y};
    if (top) {
      root({H, V});
    } else {
      run_h(H, X, h_dir > 0 ? i0 + 2 * s : i0, Y, lh);
      run_v(V, X, Y, v_dir > 0 ? j0 + 2 * s : j0, rv);
    }
    return {H, V};
  }

  void root(Outputs o) {
    const std::pair<int, double> t[] = {{o.h, 1.0}, {o.v, 1.0}};
    logical.add_square(1.0, -1.0, t);
  }
};

}  // namespace

FractalUnary fractal_embed_unary(int N, int J) {
  if (N < 2) throw InvalidParameter("fractal_embed_unary: N must be >= 2");
  if (J < 4)
    throw UnsupportedCell("fractal_embed_unary: leaf cells need K_{4,4} or larger");
  int k = 0;
  while ((std::int64_t{4} << (2 * k)) < N) ++k;
  const int L = (2 << k) - 1;
  Builder b(J, L);
  b.block(k, 0, 0, 0, 0, +1, +1, true);

  FractalUnary out;
  for (std::size_t t = 0; t < b.leaves.size(); ++t) {
    if (static_cast<int>(t) < N) {
      out.leaves.push_back(b.leaves[t]);
    } else {
      out.padding.push_back(b.leaves[t]);
      b.logical.add_linear(b.leaves[t], 1.0);
    }
  }
  out.logical = b.logical;
  out.embedding.lattice = chimera_spec(J, L);
  out.embedding.chains = b.chains;
  for (auto& ch : out.embedding.chains) std::sort(ch.begin(), ch.end());
  out.embedding.names = b.logical.var_names();
  out.embedded = embed_qubo(out.logical, out.embedding);
  out.embedding.alpha = out.embedded.embedding.alpha;
  out.layout = std::move(b.layout);
  out.layout.N = N;
  out.layout.J = J;
  out.layout.L = L;
  out.layout.leaf_cells = static_cast<int>(out.layout.leaf_cell_coords.size());
  out.layout.depth = 2 * k + 2;
  return out;
}

double filled_capacity(int m, int J) {
  double L = 1, n = J;
  for (int t = 1; t < m; ++t) {
    n = 4 * n + (J - 2) * L;
    L = 2 * L + 1;
  }
  return n;
}

double predicted_unary_length(double N, int J, bool optimized) {
  if (N < 1 || J < 1) throw InvalidParameter("predicted_unary_length: N, J >= 1");
  if (!optimized) return 2.0 * std::sqrt(N / J) - 1.0;
  double L = 1, n = J;
  for (int m = 1; m <= 24; ++m) {
    if (n >= N) return L;
    n = 4 * n + (J - 2) * L;
    L = 2 * L + 1;
  }
  return std::sqrt(12.0 * N / (5.0 * J - 4.0));
}

FractalUnary fill_tree_optimize(const FractalUnary& base, int max_branches) {
  FractalUnary out = base;
  const int J = base.layout.J;
  if (J - 2 <= 0 || J < 4) {
    out.layout.notices.push_back("no branch capacity for J < 4");
    return out;
  }
  const LatticeGraph g(out.embedding.lattice);
  std::vector<int> owner(g.num_vertices(), -1);
  for (int v = 0; v < out.embedding.num_logical(); ++v)
    for (int p : out.embedding.chains[v]) owner[p] = v;
  auto vtx = [&](int i, int j, Side s, int idx) {
    return g.index(i, j, s == Side::Left ? idx : J + idx);
  };
  auto free_count = [&](int i, int j, Side s) {
    int f = 0;
    for (int idx = 0; idx < J; ++idx) f += owner[vtx(i, j, s, idx)] < 0;
    return f;
  };
  auto new_var = [&](const std::string& name) {
    const int id = out.logical.add_var(name);
    out.embedding.chains.emplace_back();
    out.embedding.names.push_back(name);
    return id;
  };
  auto put = [&](int v, int i, int j, Side s, int idx) {
    const int p = vtx(i, j, s, idx);
    owner[p] = v;
    out.embedding.chains[v].push_back(p);
    out.layout.roles.push_back({i, j, s, idx, out.logical.name(v)});
  };
  auto take_free = [&](int i, int j, Side s) {
    for (int idx = 0; idx < J; ++idx)
      if (owner[vtx(i, j, s, idx)] < 0) return idx;
    return -1;
  };

  int added = 0, counter = 0;
  const std::vector<int> original = out.leaves;
  std::vector<int> leaves;
  for (int x : original) {
    const bool budget = max_branches < 0 || added < max_branches;
    const auto& chain = out.embedding.chains[x];
    bool expanded = false;
    if (budget && chain.size() == 1) {
      const auto cc = g.coord(chain[0]);
      const Side side = cc.a < J ? Side::Left : Side::Right;
      const Side other = side == Side::Left ? Side::Right : Side::Left;
      const int idx = side == Side::Left ? cc.a : cc.a - J;
      for (int dir : {+1, -1}) {
        const int i = side == Side::Left ? cc.i + dir : cc.i;
        const int j = side == Side::Left ? cc.j : cc.j + dir;
        if (i < 0 || j < 0 || i >= g.spec().rows || j >= g.spec().cols) continue;
        if (owner[vtx(i, j, side, idx)] >= 0) continue;
        if (free_count(i, j, side) < 4 || free_count(i, j, other) < 3) continue;
        // x becomes a partial sum u = a + t, t = b + c.
        put(x, i, j, side, idx);
        const std::string tag = "f" + std::to_string(++counter);
        const int w1 = new_var(tag + "_w1");
        put(w1, i, j, side, take_free(i, j, side));
        const int b = new_var(tag + "_b");
        put(b, i, j, side, take_free(i, j, side));
        const int c = new_var(tag + "_c");
        put(c, i, j, side, take_free(i, j, side));
        const int a = new_var(tag + "_a");
        put(a, i, j, other, take_free(i, j, other));
        const int t = new_var(tag + "_t");
        put(t, i, j, other, take_free(i, j, other));
        const int w2 = new_var(tag + "_w2");
        put(w2, i, j, other, take_free(i, j, other));
        add_sum_gadget(out.logical, x, w1, a, t);
        add_sum_gadget(out.logical, t, w2, b, c);
        leaves.insert(leaves.end(), {a, b, c});
        out.layout.leaf_cell_coords.push_back({i, j});
        ++added;
        expanded = true;
        break;
      }
    }
    if (!expanded) leaves.push_back(x);
  }
  out.leaves = leaves;
  if (added == 0) {
    out.layout.notices.push_back("no free cells adjacent to leaves");
    return out;
  }
  for (auto& ch : out.embedding.chains) std::sort(ch.begin(), ch.end());
  out.layout.N = static_cast<int>(leaves.size());
  out.embedded = embed_qubo(out.logical, out.embedding);
  out.embedding.alpha = out.embedded.embedding.alpha;
  const auto report = validate(out.embedding, interaction_graph(out.logical));
  if (!report.ok()) throw InfeasibleEmbedding(report.describe());
  return out;
}

}  // namespace qlat
