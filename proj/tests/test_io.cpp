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

#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "qlat/adder.hpp"
#include "qlat/coloring.hpp"
#include "qlat/io.hpp"
#include "qlat/unary.hpp"

namespace qlat {
namespace {

using testing::Gen;

template <class T, class To, class From>
T reparse(const T& value, To to, From from) {
  const std::string text = dump_json(to(value));
  T back = from(parse_json(text));
  EXPECT_EQ(dump_json(to(back)), text);
  return back;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DocumentError& e) {
    return e.what();
  }
  return "";
}

TEST(Io, LatticeRoundTrip) {
  for (const LatticeSpec& s :
       {chimera_spec(4, 3), chimera_spec(2, 1), LatticeSpec(chimera_cell(3), 2, 5)})
    EXPECT_EQ(reparse(s, lattice_to_json, lattice_from_json), s);
  LatticeSpec generic(chimera_cell(2), 3);
  generic.cell.chimera_J = 0;
  generic.cell.A_v[0][1] = 1;
  const Json j = lattice_to_json(generic);
  EXPECT_FALSE(j.contains("family"));
  EXPECT_EQ(j["A"].size(), 4u);
  EXPECT_EQ(reparse(generic, lattice_to_json, lattice_from_json), generic);
}

TEST(Io, ChimeraFamilyForm) {
  const Json j = lattice_to_json(chimera_spec(4, 2));
  EXPECT_EQ(j.dump(), R"({"family":"chimera","J":4,"L":2})");
}

TEST(Io, LatticeArgument) {
  EXPECT_EQ(parse_lattice_arg("chimera:4,16"), chimera_spec(4, 16));
  EXPECT_EQ(parse_lattice_arg("chimera:2,3,5"),
            LatticeSpec(chimera_cell(2), 3, 5));
  for (const char* bad : {"pegasus:4,2", "chimera:4", "chimera:4,x", "chimera:0,2",
                          "chimera:4,2,"})
    EXPECT_THROW(parse_lattice_arg(bad), DocumentError) << bad;
}

TEST(Io, QuboRoundTripProperty) {
  Gen g(11);
  for (int t = 0; t < 50; ++t) {
    Qubo q = g.qubo(g.uniform_int(0, 12), g.coin() ? Domain::Binary : Domain::Spin);
    q.add_linear(0 < q.num_vars() ? 0 : q.add_var(), g.uniform(-3, 3));
    if (g.coin()) {
      std::vector<std::string> names;
      for (int i = 0; i < q.num_vars(); ++i) names.push_back("v" + std::to_string(i));
      q.set_names(names);
    }
    EXPECT_EQ(reparse(q, [](const Qubo& x) { return qubo_to_json(x); },
                      qubo_from_json),
              q);
  }
}

TEST(Io, QuboRolesRoundTrip) {
  const AdderQubo a = build_adder(2);
  const Json j = qubo_to_json(a.qubo, a.roles);
  ASSERT_TRUE(j.contains("roles"));
  const Json back = parse_json(dump_json(j));
  EXPECT_EQ(qubo_from_json(back), a.qubo);
  EXPECT_EQ(roles_from_json(back), a.roles);
  EXPECT_TRUE(roles_from_json(qubo_to_json(a.qubo)).empty());
}

TEST(Io, QuboPairsAreOrdered) {
  Qubo q(3);
  q.add_quadratic(2, 0, 1.5);
  const Json j = qubo_to_json(q);
  EXPECT_EQ(j["quadratic"][0][0], 0);
  EXPECT_EQ(j["quadratic"][0][1], 2);
}

TEST(Io, EmbeddingRoundTrip) {
  const MinorEmbedding k8 = embed_complete_chimera(8, 4);
  const Json j = embedding_to_json(k8);
  EXPECT_TRUE(j["chains"].contains("7"));
  EXPECT_EQ(reparse(k8, [](const MinorEmbedding& e) { return embedding_to_json(e); },
                    embedding_from_json),
            k8);

  MinorEmbedding named = k8;
  for (int v = 0; v < 8; ++v) named.names.push_back("n" + std::to_string(v));
  named.alpha = 2.25;
  EXPECT_EQ(reparse(named, [](const MinorEmbedding& e) { return embedding_to_json(e); },
                    embedding_from_json),
            named);
}

TEST(Io, EmbeddingLayoutExport) {
  const FractalUnary f = fractal_embed_unary(16, 4);
  const Json j = parse_json(
      dump_json(embedding_to_json(f.embedding, f.layout.node_cell)));
  EXPECT_EQ(embedding_from_json(j), f.embedding);
  EXPECT_EQ(layout_from_json(j), f.layout.node_cell);
  EXPECT_FALSE(f.layout.node_cell.empty());
}

TEST(Io, InstanceRoundTrip) {
  KnapsackInstance k{{3, 5, 7}, {2, 4, 1}, 6};
  ColoringInstance c{Graph{5, {{0, 1}, {1, 2}}}, 3};
  ColoringInstance tight{Graph{3, {{0, 1}, {2, 1}}}, 4};
  HamcycleInstance h{Graph::complete(4)};
  for (const ProblemInstance& inst :
       std::vector<ProblemInstance>{PartitionInstance{{2, 2, 3, 3}}, k, c, tight, h,
                                    UnaryRequest{5}, AdderRequest{3}}) {
    EXPECT_EQ(reparse(inst, instance_to_json, instance_from_json), inst);
  }
  EXPECT_TRUE(instance_to_json(c)["coloring"].contains("n"));
  EXPECT_FALSE(instance_to_json(tight)["coloring"].contains("n"));
  EXPECT_EQ(instance_kind(k), "knapsack");
}

TEST(Io, PartitionDocumentShape) {
  const auto inst = instance_from_json(parse_json(R"({"partition":{"numbers":[2,2,3,3]}})"));
  ASSERT_TRUE(std::holds_alternative<PartitionInstance>(inst));
  EXPECT_EQ(std::get<PartitionInstance>(inst).numbers,
            (std::vector<std::uint64_t>{2, 2, 3, 3}));
}

TEST(Io, TilePlanRoundTrip) {
  Gen g(5);
  std::vector<TilePlan> plans{route_graph_to_tiles(Graph::complete(5)),
                              route_graph_to_tiles(Graph::complete(4), 2),
                              staircase_plan(Graph::complete(6))};
  for (int t = 0; t < 10; ++t) {
    Graph gr{g.uniform_int(2, 7), {}};
    for (int u = 0; u < gr.n; ++u)
      for (int v = u + 1; v < gr.n; ++v)
        if (g.coin(0.4)) gr.edges.emplace_back(u, v);
    plans.push_back(route_graph_to_tiles(gr));
  }
  bool saw_crossing = false;
  for (const TilePlan& p : plans) {
    saw_crossing |= p.crossings() > 0;
    EXPECT_EQ(reparse(p, tile_plan_to_json, tile_plan_from_json), p);
  }
  EXPECT_TRUE(saw_crossing);
}

TEST(Io, TilePlanCrossingsInferred) {
  const TilePlan p = route_graph_to_tiles(Graph::complete(5));
  const std::string text = tile_plan_to_json(p).dump();
  EXPECT_NE(text.find("\"x\""), std::string::npos);

  TilePlan border;
  border.rows = 1;
  border.cols = 2;
  border.num_vertices = 2;
  border.grid = {TileRole::crossing(0, 1), TileRole::owned(0)};
  border.chain_routes = {{{0, 0}, {0, 1}}, {{0, 0}}};
  const Json j = tile_plan_to_json(border);
  EXPECT_EQ(j["grid"][0][0], "x0,1");
  EXPECT_EQ(tile_plan_from_json(j), border);
}

TEST(Io, CycleRoundTrip) {
  const std::vector<int> c{0, 2, 1, 3};
  EXPECT_EQ(cycle_to_json(c).dump(), R"({"cycle":[0,2,1,3]})");
  EXPECT_EQ(cycle_from_json(cycle_to_json(c)), c);
}

TEST(Io, FieldDiagnostics) {
  EXPECT_NE(error_of([] { parse_json("{\"a\": [1,\n 2,, 3]}"); }).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              qubo_from_json(parse_json(
                  R"({"domain":"binary","num_vars":2,"offset":0,"linear":[],)"
                  R"("quadratic":[[0,1,"x"]]})"));
            }).find("quadratic[0][2]"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              qubo_from_json(parse_json(
                  R"({"domain":"binary","num_vars":2,"offset":0,"linear":[[5,1]],)"
                  R"("quadratic":[]})"));
            }).find("linear[0][0]"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              qubo_from_json(parse_json(
                  R"({"domain":"binary","num_vars":2,"offset":0,"linear":[],)"
                  R"("quadratic":[[1,0,1]]})"));
            }).find("i < j"),
            std::string::npos);
  EXPECT_NE(error_of([] { instance_from_json(parse_json(R"({"knapsack":{"values":[1]}})")); })
                .find("knapsack: missing field \"weights\""),
            std::string::npos);
  EXPECT_NE(error_of([] {
              instance_from_json(parse_json(R"({"coloring":{"edges":[[0,0]],"q":2}})"));
            }).find("coloring.edges[0]"),
            std::string::npos);
  EXPECT_NE(error_of([] { instance_from_json(parse_json(R"({"sat":{}})")); })
                .find("unknown instance type"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              embedding_from_json(parse_json(
                  R"({"lattice":{"family":"chimera","J":4,"L":1},"alpha":1,)"
                  R"("chains":{"0":[8]}})"));
            }).find("chains.0[0]"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              tile_plan_from_json(parse_json(R"({"tile_side":1,"grid":[["x"]],"edges":[]})"));
            }).find("grid[0][0]"),
            std::string::npos);
  EXPECT_NE(error_of([] { lattice_from_json(parse_json(R"({"family":"pegasus","J":4,"L":1})")); })
                .find("family"),
            std::string::npos);
}

TEST(Io, DumpIsDeterministic) {
  const auto c = compile_coloring({Graph::complete(3), 3});
  const std::string a = dump_json(qubo_to_json(c.embedded.physical));
  const std::string b = dump_json(qubo_to_json(compile_coloring({Graph::complete(3), 3}).embedded.physical));
  EXPECT_EQ(a, b);
  EXPECT_EQ(reparse(c.plan, tile_plan_to_json, tile_plan_from_json), c.plan);
}

}  // namespace
}  // namespace qlat
