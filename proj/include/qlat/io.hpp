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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qlat/coloring.hpp"
#include "qlat/embedding.hpp"
#include "qlat/hamcycle.hpp"
#include "qlat/lattice.hpp"
#include "qlat/numpart.hpp"
#include "qlat/qubo.hpp"
#include "qlat/tiling.hpp"

namespace qlat {

using Json = nlohmann::ordered_json;

// Parse errors carry nlohmann's line and column; field errors carry a path
// such as "quadratic[3][1]".
Json parse_json(std::string_view text);
std::string dump_json(const Json& doc);

Json read_document(const std::string& path);
void write_document(const std::string& path, const Json& doc);

Json lattice_to_json(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const Json& doc);
// "chimera:J,L" or "chimera:J,R,C".
LatticeSpec parse_lattice_arg(std::string_view text);

using RoleIndex = std::map<std::string, int>;

Json qubo_to_json(const Qubo& q, const RoleIndex& roles = {});
Qubo qubo_from_json(const Json& doc);
RoleIndex roles_from_json(const Json& doc);

using CellLayout = std::map<std::string, std::array<int, 2>>;

Json embedding_to_json(const MinorEmbedding& e, const CellLayout& layout = {});
MinorEmbedding embedding_from_json(const Json& doc);
CellLayout layout_from_json(const Json& doc);

struct UnaryRequest {
  int N = 0;
  bool operator==(const UnaryRequest&) const = default;
};

struct AdderRequest {
  int n = 0;
  bool operator==(const AdderRequest&) const = default;
};

using ProblemInstance =
    std::variant<PartitionInstance, KnapsackInstance, ColoringInstance,
                 HamcycleInstance, UnaryRequest, AdderRequest>;

Json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const Json& doc);
std::string instance_kind(const ProblemInstance& inst);

Json tile_plan_to_json(const TilePlan& plan);
TilePlan tile_plan_from_json(const Json& doc);

Json cycle_to_json(std::span<const int> cycle);
std::vector<int> cycle_from_json(const Json& doc);

}  // namespace qlat
