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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qlat/errors.hpp"

namespace qlat {

using BitMatrix = std::vector<std::vector<std::uint8_t>>;

// Intra-cell, horizontal and vertical coupling patterns of one unit cell.
struct CellAdjacency {
  int n = 0;
  BitMatrix A;
  BitMatrix A_h;
  BitMatrix A_v;
  // Set for K_{J,J} cells; 0 for custom cells.
  int chimera_J = 0;

  int intra_edges() const;
  int horizontal_edges() const;
  int vertical_edges() const;
  void check() const;

  bool operator==(const CellAdjacency&) const = default;
};

CellAdjacency chimera_cell(int J);

struct LatticeSpec {
  CellAdjacency cell;
  int rows = 1;
  int cols = 1;

  LatticeSpec() = default;
  LatticeSpec(CellAdjacency c, int L) : cell(std::move(c)), rows(L), cols(L) {}
  LatticeSpec(CellAdjacency c, int r, int k)
      : cell(std::move(c)), rows(r), cols(k) {}

  int side() const { return rows; }
  bool square() const { return rows == cols; }
  int num_vertices() const { return cell.n * rows * cols; }
  bool operator==(const LatticeSpec&) const = default;
};

LatticeSpec chimera_spec(int J, int L);

using Edge = std::pair<int, int>;

struct CellCoord {
  int i = 0;
  int j = 0;
  int a = 0;
};

class LatticeGraph {
 public:
  explicit LatticeGraph(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  int num_vertices() const { return spec_.num_vertices(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  // Sorted, each pair with first < second.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const;
  bool has_edge(int u, int v) const;
  double average_degree() const;

  int index(int i, int j, int a) const {
    return (i * spec_.cols + j) * spec_.cell.n + a;
  }
  CellCoord coord(int v) const;

 private:
  LatticeSpec spec_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Induced subgraph on a rectangle of cells, with local <-> parent maps.
struct LatticeView {
  LatticeGraph graph;
  std::vector<int> to_parent;
  std::vector<int> from_parent;  // -1 outside the rectangle
  int i0 = 0;
  int j0 = 0;
  // Parent edges with exactly one endpoint inside.
  std::vector<Edge> cut_edges;
};

LatticeView sublattice(const LatticeGraph& g, int i0, int j0, int r1, int r2);

}  // namespace qlat
