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
#include <optional>
#include <string>
#include <vector>

#include "qlat/lattice.hpp"
#include "qlat/qubo.hpp"

namespace qlat {

// Simple undirected graph on vertices 0..n-1.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  static Graph complete(int n);
  bool has_edge(int u, int v) const;
  bool operator==(const Graph&) const = default;
};

Graph interaction_graph(const Qubo& q);

struct MinorEmbedding {
  LatticeSpec lattice;
  std::vector<std::vector<int>> chains;  // logical id -> lattice vertices
  std::vector<std::string> names;        // optional logical labels
  double alpha = 1.0;

  int num_logical() const { return static_cast<int>(chains.size()); }
  int num_physical() const;
  bool operator==(const MinorEmbedding&) const = default;
};

enum class ViolationKind { EmptyChain, OutOfRange, Disconnected, Overlap, MissingEdge };

struct Violation {
  ViolationKind kind;
  int u = -1;        // logical vertex
  int v = -1;        // second logical vertex for Overlap / MissingEdge
  int witness = -1;  // physical vertex
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ValidationReport validate(const MinorEmbedding& e, const Graph& logical);

MinorEmbedding embed_complete_generic(int N, const LatticeSpec& spec,
                                      int u_role, int v_role);
MinorEmbedding embed_complete_chimera(int N, int J);

struct Placement {
  Edge logical;
  Edge physical;  // lattice vertex indices
};

struct EmbeddedQubo {
  // Variables are compact slots; vertex_of maps a slot to its lattice vertex.
  Qubo physical;
  std::vector<int> vertex_of;
  std::vector<int> chain_of;  // slot -> logical id
  MinorEmbedding embedding;
  Qubo logical;
  std::vector<Placement> placements;

  int slot(int lattice_vertex) const;
};

double choose_alpha(const Qubo& logical);

// alpha <= 0 selects choose_alpha on the binary form of the logical QUBO.
EmbeddedQubo embed_qubo(const Qubo& logical, const MinorEmbedding& e,
                        double alpha = 0.0);

struct Unembedded {
  Assignment logical;
  int broken_chains = 0;
};

Unembedded unembed(const EmbeddedQubo& e, std::span<const int> physical);

// Chain-intact subspace generator: lifts a logical assignment to slots.
Assignment lift_logical(const EmbeddedQubo& e, std::span<const int> logical);

}  // namespace qlat
