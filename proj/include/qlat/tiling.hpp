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

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlat/embedding.hpp"
#include "qlat/lattice.hpp"
#include "qlat/qubo.hpp"

namespace qlat {

enum class TileKind { Empty, Vertex, Crossing };

struct TileRole {
  TileKind kind = TileKind::Empty;
  int vertex = -1;    // owner, or the horizontal traveller of a crossing
  int vertical = -1;  // vertical traveller of a crossing

  static TileRole empty() { return {}; }
  static TileRole owned(int v) { return {TileKind::Vertex, v, -1}; }
  static TileRole crossing(int h, int v) { return {TileKind::Crossing, h, v}; }

  // Vertex whose chain runs through the west/east sides, -1 if none.
  int horizontal_carrier() const;
  // Vertex whose chain runs through the north/south sides, -1 if none.
  int vertical_carrier() const;

  bool operator==(const TileRole&) const = default;
};

struct TilePos {
  int r = 0;
  int c = 0;
  auto operator<=>(const TilePos&) const = default;
};

struct EdgeRealization {
  int u = 0;
  int v = 0;
  TilePos a;  // u's tile
  TilePos b;  // v's tile
  bool operator==(const EdgeRealization&) const = default;
};

struct TilePlan {
  int tile_side = 1;
  int rows = 0;
  int cols = 0;
  int num_vertices = 0;
  std::vector<TileRole> grid;  // row-major
  std::vector<EdgeRealization> edges;
  std::vector<std::vector<TilePos>> chain_routes;

  const TileRole& at(int r, int c) const { return grid[r * cols + c]; }
  TileRole& at(int r, int c) { return grid[r * cols + c]; }
  const TileRole& at(TilePos p) const { return at(p.r, p.c); }
  bool inside(int r, int c) const {
    return r >= 0 && c >= 0 && r < rows && c < cols;
  }
  int side() const { return rows > cols ? rows : cols; }
  int crossings() const;
  bool operator==(const TilePlan&) const = default;
};

// Fills edge realizations (smallest adjacent pair in row-major order) and
// chain routes from the grid. Throws InfeasibleEmbedding if an edge of g has
// no adjacent pair of vertex tiles.
void finish_plan(TilePlan& plan, const Graph& g);

// Builds a plan from rows of letters: 'A'+k is vertex k, '.' empty and '+' a
// crossing whose travellers are read off its neighbors.
TilePlan plan_from_pattern(std::span<const std::string> rows, const Graph& g,
                           int tile_side = 1);

// Empty result means the plan is valid for g.
std::vector<std::string> check_plan(const TilePlan& plan, const Graph& g);

// Row/column staircase for any g, side 2N-3 for N >= 3.
TilePlan staircase_plan(const Graph& g, int tile_side = 1);

TilePlan route_graph_to_tiles(const Graph& g, int tile_side = 1);

// Spin templates. Sites are (cell x, cell y, cell index a) inside a tile and
// the logical bit of the owning vertex.
struct TileSite {
  int x = 0;
  int y = 0;
  int a = 0;
  int bit = 0;
  bool operator==(const TileSite&) const = default;
};

struct TileTemplate {
  Qubo qubo;  // spin domain, variable k lives at sites[k]
  std::vector<TileSite> sites;
};

struct PairSite {
  int side = 0;
  TileSite site;
  bool operator==(const PairSite&) const = default;
};

// Two-party template. For edges and chains side 0 is the west/north tile;
// for crossings both sides share one tile, side 0 travelling horizontally.
struct PairTemplate {
  Qubo qubo;
  std::vector<PairSite> sites;
};

struct TileHamiltonians {
  int tile_side = 1;
  int bits = 1;
  TileTemplate vertex_tile;
  PairTemplate edge_horizontal;
  PairTemplate edge_vertical;
  PairTemplate chain_horizontal;
  PairTemplate chain_vertical;
  PairTemplate crossing;
};

// Two ferromagnetic 4-spin paths in one K_{4,4} cell: L0-R0-L1-R1 and
// L2-R2-L3-R3. Each path reaches all four sides of the cell.
PairTemplate crossing_tile_chimera(int J = 4);

struct StitchOptions {
  bool normalize = false;
};

// Lattice cell (i, j) of tile (r, c) and in-tile cell (x, y) is
// (c*l + x, r*l + y); i runs along horizontal couplers.
EmbeddedQubo stitch(const TilePlan& plan, const TileHamiltonians& tiles,
                    const LatticeSpec& lattice, const StitchOptions& opt = {});

// Sums physical couplings per chain pair with every chain held aligned.
Qubo contract_chains(const Qubo& physical, std::span<const int> chain_of,
                     int num_logical);

// Mirrors an embedding across the lattice diagonal: cell (i, j) becomes
// (j, i) and left and right sides swap.
EmbeddedQubo transpose_embedded(const EmbeddedQubo& e);

struct SupertileCoupling {
  int i = 0;  // logical variable of the first problem
  int j = 0;  // logical variable of the second problem
  double weight = 0.0;
};

// Interleaves two embeddings on L x L lattices into 2L x 2L: cell (i, j) of
// the first goes to (2i, 2j) and of the second to (2i+1, 2j+1). A coupling
// grows both chains through free vertices of a supertile hosting both
// variables until they touch; couplers land in the off-diagonal quadrants.
EmbeddedQubo supertile_compose(const EmbeddedQubo& first,
                               const EmbeddedQubo& second,
                               std::span<const SupertileCoupling> couplings);

}  // namespace qlat
