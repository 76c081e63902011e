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
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qlat/io.hpp"

namespace qlat {

enum class Strategy { Tree, Complete, Tiles };
enum class SolverKind { Brute, Anneal };

Strategy parse_strategy(std::string_view s);
std::string strategy_name(Strategy s);
SolverKind parse_solver(std::string_view s);
std::string solver_name(SolverKind s);

// Every random draw of a run comes from one generator seeded here.
struct SeedStreams {
  explicit SeedStreams(std::uint64_t seed);
  std::uint64_t seed = 0;
  std::uint64_t noise = 0;
  std::uint64_t anneal = 0;
};

struct EmbedSettings {
  Strategy strategy = Strategy::Tree;
  std::optional<LatticeSpec> lattice;
  bool normalize = false;
  std::optional<double> noise;  // sigma scale
  std::uint64_t seed = 0;
};

struct SolveSettings {
  SolverKind solver = SolverKind::Brute;
  std::uint64_t seed = 0;
  int sweeps = 1000;
  int restarts = 10;
};

// tree for sums and unary, tiles for coloring and cycles, complete for adders.
Strategy default_strategy(const ProblemInstance& inst);

struct BuiltQubo {
  Qubo qubo;
  RoleIndex roles;
};

// The logical QUBO the strategy embeds.
BuiltQubo build_logical(const ProblemInstance& inst, Strategy s);

struct Compiled {
  ProblemInstance instance;
  Strategy strategy = Strategy::Tree;
  EmbeddedQubo embedded;
  CellLayout layout;
  RoleIndex roles;
  double scale = 1.0;          // normalization multiplier
  int window_exponent = -1;    // knapsack only
  std::optional<SummationTreeQubo> tree;
  std::optional<CompiledColoring> coloring;
  std::vector<int> leaves;     // unary only
};

// Throws InvalidParameter for strategies the instance type lacks.
Compiled compile(const ProblemInstance& inst, const EmbedSettings& s);

// Moves an embedding onto a lattice with the same cell and at least its
// extent; throws InfeasibleEmbedding naming the required side otherwise.
EmbeddedQubo rehost(const EmbeddedQubo& e, const LatticeSpec& target);

struct Decoded {
  Json solution;
  bool ok = false;
};

Decoded decode(const Compiled& c, std::span<const int> logical);

struct CommandResult {
  Json doc;
  int exit_code = 0;
};

Json cmd_lattice(const LatticeSpec& spec);
Json cmd_build(const ProblemInstance& inst, Strategy s);
Json cmd_embed(const ProblemInstance& inst, const EmbedSettings& s);
// `input` is an instance document or a cmd_embed document.
CommandResult cmd_solve(const Json& input, const EmbedSettings& embed,
                        const SolveSettings& solve);
// Checks against the embedded logical QUBO when present, else `logical`,
// else K_n if `complete`, else chain structure only.
CommandResult cmd_validate(const Json& input, const std::optional<Qubo>& logical,
                           bool complete);
// QUBO, embedded or coloring instance document.
Json cmd_gap(const Json& input);
// kind: numpart, knapsack, unary, clique, hamcycle.
Json cmd_predict(std::string_view kind, const std::map<std::string, double>& p);
std::string cmd_cartoon(int n_min, int n_max, char delimiter = '\t');

}  // namespace qlat
