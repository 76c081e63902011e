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

#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlat/embedding.hpp"
#include "qlat/qubo.hpp"
#include "qlat/tiling.hpp"

namespace qlat {

struct HamcycleInstance {
  Graph graph;
  int N() const { return graph.n; }
  bool operator==(const HamcycleInstance&) const = default;
};

// Binary QUBO over x_{v,j} with id v*N + j.
struct ICQubo {
  int N = 0;
  Qubo qubo;
  int x(int v, int j) const { return v * N + j; }
};

ICQubo build_ic_qubo(const HamcycleInstance& inst);

// Directed Hamiltonian cycles starting at vertex 0 (each undirected cycle
// appears once per direction).
std::vector<std::vector<int>> hamiltonian_cycles(const Graph& g);

struct CycleDecode {
  std::vector<int> cycle;  // vertex at position 0, 1, ...
  std::string failure;     // empty on success
  bool ok() const { return failure.empty(); }
};

// Reads x_{v,j} = solution[v*N + j]; further entries are ignored.
CycleDecode decode_cycle(std::span<const int> solution,
                         const HamcycleInstance& inst);

// Penalty for z != x*y: 0 when z = xy, at least 1/2 otherwise.
double and_gadget(int z, int x, int y);
void add_and_gadget(Qubo& binary, int z, int x, int y);

struct HamTreeNode {
  int var = -1;
  int z = -1;  // z_{v,uv} held by this subtile, -1 if none
  int X = 0;   // subtile coordinates
  int Y = 0;
  int parent = -1;
  std::vector<int> children;
};

struct HamLineClaim {
  int X = 0;
  int Y = 0;
  bool row = true;
  int k = 0;
  int var = 0;
};

struct TileHamcycleQubo {
  int N = 0;
  Qubo qubo;  // binary
  TilePlan plan;
  // Keyed by (v, u): z_{v,uv} and z_{v,uv,j}.
  std::map<std::pair<int, int>, int> z_edge;
  std::map<std::pair<int, int>, std::vector<int>> z_step;
  // Per vertex: partial-sum tree over its subtiles, root first.
  std::vector<std::vector<HamTreeNode>> tree;
  // Per vertex: the unary-constraint terms alone, on global ids.
  std::vector<Qubo> tree_block;
  // Layout over 2x2 subtiles per plan tile, independent of J.
  int subtiles_x = 0;
  int subtiles_y = 0;
  int lines = 0;
  std::vector<HamLineClaim> claims;

  int x(int v, int j) const { return v * N + j; }
};

TileHamcycleQubo build_tileable_hamcycle(const HamcycleInstance& inst);

// The zero-energy assignment for a directed cycle (vertex per position).
Assignment tileable_hamcycle_state(const TileHamcycleQubo& t,
                                   std::span<const int> cycle);

EmbeddedQubo embed_tileable_hamcycle(const TileHamcycleQubo& t, int J = 4);
EmbeddedQubo embed_tileable_hamcycle(const HamcycleInstance& inst, int J = 4);

// N parallel unary trees for the fixed-position constraints threaded through
// an H-tree of tiles; the fixed-vertex constraints sit in leaf tiles.
// max_side > 0 bounds the lattice side.
EmbeddedQubo embed_permutation_tree(int N, int J = 4, int max_side = 0);

// Size formulas.
double tileable_hamcycle_estimate(int N, int L_G);  // L_G/4 * 9(N+1)
double tileable_hamcycle_bound(int N, int L_G);     // L_G/2 * (3N+5)
int tileable_hamcycle_side(int N, int L_G, int J = 4);
double complete_hamcycle_length(int N);             // N^2/4
double permutation_tree_length(int N);              // N/2 (2 sqrt N - 1)
int permutation_tree_side(int N, int J = 4);

}  // namespace qlat
