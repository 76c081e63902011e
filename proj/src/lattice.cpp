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

#include "qlat/lattice.hpp"

#include <algorithm>
#include <string>

namespace qlat {

namespace {

int count_ones(const BitMatrix& m) {
  int c = 0;
  for (const auto& row : m)
    for (auto b : row) c += b ? 1 : 0;
  return c;
}

void check_square(const BitMatrix& m, int n, const char* name) {
  if (static_cast<int>(m.size()) != n)
    throw InvalidParameter(std::string(name) + ": wrong row count");
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != n)
      throw InvalidParameter(std::string(name) + ": wrong column count");
    for (auto b : row)
      if (b > 1) throw InvalidParameter(std::string(name) + ": entry not 0/1");
  }
}

}  // namespace

int CellAdjacency::intra_edges() const {
  int c = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) c += A[a][b] ? 1 : 0;
  return c;
}

int CellAdjacency::horizontal_edges() const { return count_ones(A_h); }
int CellAdjacency::vertical_edges() const { return count_ones(A_v); }

void CellAdjacency::check() const {
  if (n < 1) throw InvalidParameter("cell: n must be positive");
  check_square(A, n, "A");
  check_square(A_h, n, "A_h");
  check_square(A_v, n, "A_v");
  for (int a = 0; a < n; ++a) {
    if (A[a][a]) throw InvalidParameter("A: nonzero diagonal");
    for (int b = 0; b < n; ++b)
      if (A[a][b] != A[b][a]) throw InvalidParameter("A: not symmetric");
  }
}

CellAdjacency chimera_cell(int J) {
  if (J < 1) throw InvalidParameter("chimera_cell: J must be >= 1");
  CellAdjacency c;
  c.n = 2 * J;
  c.chimera_J = J;
  c.A.assign(c.n, std::vector<std::uint8_t>(c.n, 0));
  c.A_h = c.A;
  c.A_v = c.A;
  for (int a = 0; a < J; ++a) {
    for (int b = J; b < 2 * J; ++b) c.A[a][b] = c.A[b][a] = 1;
    c.A_h[a][a] = 1;
    c.A_v[J + a][J + a] = 1;
  }
  return c;
}

LatticeSpec chimera_spec(int J, int L) {
  if (L < 1) throw InvalidParameter("lattice side must be >= 1");
  return LatticeSpec(chimera_cell(J), L);
}

LatticeGraph::LatticeGraph(LatticeSpec spec) : spec_(std::move(spec)) {
  spec_.cell.check();
  if (spec_.rows < 1 || spec_.cols < 1)
    throw InvalidParameter("lattice side must be >= 1");
  const auto& c = spec_.cell;
  const int n = c.n;
  for (int i = 0; i < spec_.rows; ++i) {
    for (int j = 0; j < spec_.cols; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b)
          if (c.A[a][b]) edges_.emplace_back(index(i, j, a), index(i, j, b));
        for (int b = 0; b < n; ++b) {
          // Horizontal couplers join cell (i,j) to (i+1,j); vertical to (i,j+1).
          if (c.A_h[a][b] && i + 1 < spec_.rows)
            edges_.emplace_back(index(i, j, a), index(i + 1, j, b));
          if (c.A_v[a][b] && j + 1 < spec_.cols)
            edges_.emplace_back(index(i, j, a), index(i, j + 1, b));
        }
      }
    }
  }
  for (auto& e : edges_)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adj_.assign(num_vertices(), {});
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

const std::vector<int>& LatticeGraph::neighbors(int v) const {
  if (v < 0 || v >= num_vertices())
    throw InvalidParameter("neighbors: vertex out of range");
  return adj_[v];
}

bool LatticeGraph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices())
    return false;
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

double LatticeGraph::average_degree() const {
  return num_vertices() == 0 ? 0.0 : 2.0 * num_edges() / num_vertices();
}

CellCoord LatticeGraph::coord(int v) const {
  const int n = spec_.cell.n;
  const int cell = v / n;
  return {cell / spec_.cols, cell % spec_.cols, v % n};
}

LatticeView sublattice(const LatticeGraph& g, int i0, int j0, int r1, int r2) {
  const auto& s = g.spec();
  if (i0 < 0 || j0 < 0 || r1 < 1 || r2 < 1 || i0 + r1 > s.rows ||
      j0 + r2 > s.cols)
    throw InvalidParameter("sublattice: rectangle out of bounds");
  LatticeView view{LatticeGraph(LatticeSpec(s.cell, r1, r2)), {}, {}, i0, j0,
                   {}};
  const int n = s.cell.n;
  view.to_parent.resize(view.graph.num_vertices());
  view.from_parent.assign(g.num_vertices(), -1);
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r2; ++j)
      for (int a = 0; a < n; ++a) {
        const int local = view.graph.index(i, j, a);
        const int parent = g.index(i0 + i, j0 + j, a);
        view.to_parent[local] = parent;
        view.from_parent[parent] = local;
      }
  for (auto [u, v] : g.edges())
    if ((view.from_parent[u] < 0) != (view.from_parent[v] < 0))
      view.cut_edges.emplace_back(u, v);
  return view;
}

}  // namespace qlat
