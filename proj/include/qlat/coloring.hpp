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

#include <optional>
#include <vector>

#include "qlat/embedding.hpp"
#include "qlat/qubo.hpp"
#include "qlat/tiling.hpp"

namespace qlat {

struct ColoringInstance {
  Graph graph;
  int q = 0;
  bool operator==(const ColoringInstance&) const = default;
};

// Symmetric vertex-tile ansatz. Diagonal cells carry
// A (Σs)(Σr) + B Σ s^i r^i + C Σ(s + r), off-diagonal cells
// D (Σs)(Σr) + E Σ(s + r) and in-tile chains F s s; everything is scaled by
// lambda. Adjacent tiles of different vertices add G Σ (s_u + 1)(s_v + 1).
struct ColoringCoefficients {
  double A = 1.0;
  double B = -2.0;
  double C = 2.0;
  double D = 0.5;
  double E = 2.0;
  double F = -1.0;
  double G = 0.5;
  double lambda = 0.5;
  bool operator==(const ColoringCoefficients&) const = default;
};

ColoringCoefficients paper_coefficients(int q);

// Spin fragments on one cell: variables 0..3 are s, 4..7 are r.
Qubo h_diag();
Qubo h_off();

struct ColoringTileSet {
  int q = 0;
  int tile_side = 1;
  ColoringCoefficients coef;
  TileHamiltonians tiles;
};

ColoringTileSet build_tileset(int q);
ColoringTileSet build_tileset(int q, const ColoringCoefficients& coef);

// x_{v,i} = variable v*q + i.
Qubo coloring_reference_qubo(const ColoringInstance& inst);

struct CompiledColoring {
  ColoringInstance instance;
  TilePlan plan;
  ColoringTileSet tileset;
  EmbeddedQubo embedded;
};

CompiledColoring compile_coloring(const ColoringInstance& inst,
                                  const StitchOptions& opt = {});

// Logical spins (one per vertex and color) of a coloring; colors[v] in [0, q).
Assignment coloring_spins(const CompiledColoring& c,
                          std::span<const int> colors);

// Energy every proper coloring attains.
double feasible_energy(const CompiledColoring& c);

// Colors read from logical spins; nullopt unless every vertex is one-hot.
std::optional<std::vector<int>> decode_coloring(const CompiledColoring& c,
                                                std::span<const int> logical);

std::uint64_t count_proper_colorings(const Graph& g, int q);

enum class Assembly { OneTile, TwoTileHorizontal, TwoTileVertical, Chain };

enum class GapMode {
  Full,        // whole physical space (enumeration or elimination)
  ChainIntact  // one value per chain
};

Spectrum verify_gap(const ColoringTileSet& t, Assembly a,
                    GapMode mode = GapMode::Full);

// Value quoted for the assembly with the tile set's coefficients.
double expected_gap(const ColoringTileSet& t, Assembly a);

enum class QClass { Le4, Gt4 };

struct GridPoint {
  ColoringCoefficients coef;
  double gap = 0.0;
};

struct GridSearchResult {
  ColoringCoefficients best;
  double best_gap = 0.0;
  std::vector<GridPoint> evaluated;  // feasible tables in search order
  std::vector<ColoringCoefficients> optimal;
};

// Le4 scans (A, B, C, lambda, G) with q = 4; Gt4 scans lambda on the field
// budget surface 2 lambda + G = 2 with q = 8. Gaps use two-tile assemblies.
GridSearchResult grid_search_coefficients(QClass cls, int resolution);

// True if the table obeys the ansatz constraints and the assembled
// coefficients fit |coupling| <= 1, |field| <= 2.
bool within_budget(int q, const ColoringCoefficients& c);

}  // namespace qlat
