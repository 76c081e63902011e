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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlat/embedding.hpp"
#include "qlat/qubo.hpp"

namespace qlat {

struct UnaryTreeQubo {
  int N = 0;
  int n = 0;  // tree depth, leaves = 2^n
  Qubo qubo;  // binary
  std::vector<int> leaf_index;            // k-1 -> variable id, k <= 2^n
  std::vector<std::vector<int>> ancilla;  // ancilla[j][k-1] = y^j_k, j >= 1
  std::optional<int> slack;               // zero-allowed root bit
};

// depth_at_least pads the tree beyond ceil(log2 N) levels.
UnaryTreeQubo build_unary_qubo(int N, bool allow_zero = false,
                               int depth_at_least = 0);

// Spin terms s_x + s_y - s_z(1 + s_x + s_y) + s_w(s_x - s_y); minimum -3.
Qubo k22_gadget(int z, int x, int y, int w, int num_vars = 0);
inline constexpr double kGadgetMinimum = -3.0;

// Binary form of the gadget shifted so its minimum is 0.
void add_sum_gadget(Qubo& binary, int parent, int anc, int a, int b);

enum class Side { Left, Right };

struct CellRole {
  int i = 0;
  int j = 0;
  Side side = Side::Left;
  int index = 0;
  std::string role;  // variable name occupying the vertex
};

struct FractalLayout {
  int N = 0;             // constrained bits
  int leaf_cells = 0;    // N_*
  int L = 0;
  int J = 0;
  int depth = 0;         // tree depth of the embedded tree
  std::map<std::string, std::array<int, 2>> node_cell;
  std::vector<CellRole> roles;
  std::vector<std::array<int, 2>> leaf_cell_coords;
  std::vector<std::string> notices;
};

struct FractalUnary {
  Qubo logical;            // binary, gadgets included
  std::vector<int> leaves; // constrained bit ids in the logical QUBO
  std::vector<int> padding;
  MinorEmbedding embedding;
  EmbeddedQubo embedded;
  FractalLayout layout;
};

FractalUnary fractal_embed_unary(int N, int J);

double predicted_unary_length(double N, int J, bool optimized);

// N_m of the filled recursion for m >= 1.
double filled_capacity(int m, int J);

// Adds three-bit branches in free cells next to leaf cells; each branch
// grows the constraint by two bits.
FractalUnary fill_tree_optimize(const FractalUnary& base, int max_branches = -1);

}  // namespace qlat
