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
#include <functional>
#include <optional>
#include <vector>

#include "qlat/adder.hpp"
#include "qlat/clique_tree.hpp"
#include "qlat/embedding.hpp"
#include "qlat/qubo.hpp"

namespace qlat {

struct PartitionInstance {
  std::vector<std::uint64_t> numbers;

  int N() const { return static_cast<int>(numbers.size()); }
  int M() const;  // bits of the largest number
  std::uint64_t total() const;
  bool even() const { return total() % 2 == 0; }
  std::uint64_t W() const { return total() / 2; }
  bool operator==(const PartitionInstance&) const = default;
};

struct KnapsackInstance {
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> weights;
  std::uint64_t capacity = 0;

  int N() const { return static_cast<int>(values.size()); }
  int value_bits() const;     // l'
  int weight_bits() const;    // m'
  int capacity_bits() const;  // m, with 2^m - 1 >= capacity
  void check() const;
  bool operator==(const KnapsackInstance&) const = default;
};

// One summation node: selectable leaf adders or a free adder per tracked
// quantity (one for partitioning, value and weight for knapsack).
struct SumNode {
  int level = 0;
  std::vector<int> children;
  std::vector<int> vars;
  std::vector<Register> registers;  // output register per quantity
};

struct SummationTreeQubo {
  Qubo qubo;
  std::vector<int> selectors;  // item -> variable id, -1 if constant
  std::vector<int> selector_values;  // value when constant
  std::vector<SumNode> nodes;
  int root = -1;                     // -1 when every register is constant
  std::vector<Register> root_registers;
  int levels = 0;                    // m = ceil(log2 leaves)
  bool infeasible = false;           // known to have no zero-energy state
};

SummationTreeQubo build_numpart_qubo(const PartitionInstance& inst);

// value_prefix clamps further value-root bits below the window exponent.
SummationTreeQubo build_knapsack_qubo(
    const KnapsackInstance& inst, int target_exponent,
    const std::vector<std::pair<int, int>>& value_prefix = {});

// Width of the value root register, i.e. the admissible target exponents.
int knapsack_value_width(const KnapsackInstance& inst);

struct SumEmbedding {
  SummationTreeQubo tree;
  CliqueTreeLayout layout;
  EmbeddedQubo embedded;
};

SumEmbedding embed_summation_tree(SummationTreeQubo tree, int J);
SumEmbedding embed_numpart(const PartitionInstance& inst, int J);
SumEmbedding embed_knapsack(const KnapsackInstance& inst, int target_exponent,
                            int J);

enum class NumpartStrategy { Tree, Linear };

double predicted_numpart_length(double N, double M, int J, NumpartStrategy s);
double predicted_knapsack_length(double N, double value_bits,
                                 double weight_bits, int J);

struct PartitionDecoding {
  std::vector<int> set_a, set_b;
  std::uint64_t sum_a = 0, sum_b = 0;
  std::uint64_t residual = 0;  // |sum_a - sum_b|
  bool balanced = false;
};

PartitionDecoding decode_partition(const PartitionInstance& inst,
                                   const SummationTreeQubo& tree,
                                   std::span<const int> logical);

struct KnapsackDecoding {
  std::vector<int> items;
  std::uint64_t value = 0, weight = 0;
  bool within_capacity = false;
};

KnapsackDecoding decode_knapsack(const KnapsackInstance& inst,
                                 const SummationTreeQubo& tree,
                                 std::span<const int> logical);
KnapsackDecoding evaluate_subset(const KnapsackInstance& inst,
                                 std::vector<int> items);

using QuboSolver = std::function<AnnealResult(const Qubo&)>;

struct SweepResult {
  KnapsackDecoding best;
  int solves = 0;
  int window_exponent = -1;  // -1 if no positive value fits
};

SweepResult knapsack_sweep(const KnapsackInstance& inst, const QuboSolver& solver);

// Same sweep with a solver that sees the whole tree, e.g. to embed it.
using TreeSolver = std::function<AnnealResult(const SummationTreeQubo&)>;
SweepResult knapsack_sweep_trees(const KnapsackInstance& inst,
                                 const TreeSolver& solver);

// A (sum_j 2^j y_j + (W_max+1-2^m) y_m - sum_i W_i x_i)^2 - sum_i V_i x_i
// with m = ceil(log2 W_max); variables x_0.. then y_0..y_m. Reference only.
Qubo build_knapsack_reference(const KnapsackInstance& inst, double A);

}  // namespace qlat
