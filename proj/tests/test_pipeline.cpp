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

#include "qlat/pipeline.hpp"

namespace qlat {
namespace {

Json roundtrip(const Json& j) { return parse_json(dump_json(j)); }

TEST(Pipeline, PartitionEndToEnd) {
  const ProblemInstance inst = PartitionInstance{{2, 2, 3, 3}};
  const Json q = cmd_build(inst, Strategy::Tree);
  EXPECT_EQ(qubo_from_json(roundtrip(q)).num_vars(), 18);
  const Json emb = roundtrip(cmd_embed(inst, {}));
  const CommandResult r = cmd_solve(emb, {}, {});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.doc["solution"]["residual"], 0);
  EXPECT_EQ(r.doc["broken_chains"], 0);
  EXPECT_DOUBLE_EQ(r.doc["logical_energy"].get<double>(), 0.0);
}

TEST(Pipeline, OddPartitionIsInvalid) {
  const CommandResult r =
      cmd_solve(instance_to_json(PartitionInstance{{1, 2, 4}}), {}, {});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(r.doc["valid"].get<bool>());
}

TEST(Pipeline, CliqueEmbeddingValidates) {
  const Json k8 = roundtrip(embedding_to_json(embed_complete_chimera(8, 4)));
  const CommandResult r = cmd_validate(k8, std::nullopt, true);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.doc["lattice"]["L"], 2);
  EXPECT_EQ(r.doc["logical_edges"], 28);

  Json broken = k8;
  broken["chains"]["3"] = Json::array({0});
  const CommandResult b = cmd_validate(broken, std::nullopt, true);
  EXPECT_EQ(b.exit_code, 1);
  EXPECT_FALSE(b.doc["violations"].empty());
}

TEST(Pipeline, EmbeddedDocumentValidatesAgainstItsLogical) {
  for (const ProblemInstance& inst :
       std::vector<ProblemInstance>{PartitionInstance{{1, 2, 3}}, UnaryRequest{5},
                                    ColoringInstance{Graph::complete(3), 3},
                                    HamcycleInstance{Graph::complete(3)}}) {
    const Json doc = roundtrip(cmd_embed(inst, {default_strategy(inst)}));
    const CommandResult r = cmd_validate(doc, std::nullopt, false);
    EXPECT_EQ(r.exit_code, 0) << instance_kind(inst);
    EXPECT_EQ(r.doc["checked_against"], "logical");
  }
}

TEST(Pipeline, Predict) {
  const Json j = cmd_predict("numpart", {{"N", 16}, {"M", 2}, {"J", 4}});
  EXPECT_DOUBLE_EQ(j["tree"].get<double>(), 64.0);
  EXPECT_DOUBLE_EQ(j["linear"].get<double>(), 56.0);
  const Json h = cmd_predict("hamcycle", {{"N", 45}, {"LG", 7}});
  EXPECT_DOUBLE_EQ(h["tileable_bound"].get<double>(), 490.0);
  EXPECT_EQ(cmd_predict("clique", {{"N", 8}})["L"], 2);
  EXPECT_THROW(cmd_predict("numpart", {{"N", 16}}), DocumentError);
  EXPECT_THROW(cmd_predict("sat", {}), DocumentError);
}

TEST(Pipeline, SeededOutputsAreByteIdentical) {
  const ProblemInstance inst = PartitionInstance{{3, 1, 1, 2, 2, 1}};
  EmbedSettings s;
  s.normalize = true;
  s.noise = 0.05;
  s.seed = 9;
  const std::string a = dump_json(cmd_embed(inst, s));
  EXPECT_EQ(a, dump_json(cmd_embed(inst, s)));
  s.seed = 10;
  EXPECT_NE(a, dump_json(cmd_embed(inst, s)));

  SolveSettings anneal{SolverKind::Anneal, 4, 200, 3};
  const Json in = instance_to_json(inst);
  EXPECT_EQ(dump_json(cmd_solve(in, {}, anneal).doc),
            dump_json(cmd_solve(in, {}, anneal).doc));
  EXPECT_EQ(cmd_solve(in, {}, anneal).doc["qlat"]["seed"], 4);
}

TEST(Pipeline, SeedStreamsDiffer) {
  const SeedStreams a(1), b(1), c(2);
  EXPECT_EQ(a.noise, b.noise);
  EXPECT_NE(a.noise, a.anneal);
  EXPECT_NE(a.noise, c.noise);
}

TEST(Pipeline, NormalizedPhysicalIsWithinRange) {
  EmbedSettings s;
  s.normalize = true;
  const Compiled c = compile(PartitionInstance{{5, 3, 2, 4}}, s);
  EXPECT_EQ(c.embedded.physical.domain(), Domain::Spin);
  EXPECT_LE(max_offdiagonal(c.embedded.physical), 1.0 + 1e-12);
  EXPECT_LE(max_field(c.embedded.physical), 2.0 + 1e-12);
  EXPECT_LT(c.scale, 1.0);
  const CommandResult r = cmd_solve(instance_to_json(PartitionInstance{{5, 3, 2, 4}}), s, {});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.doc["solution"]["residual"], 0);
}

TEST(Pipeline, RehostOntoLargerLattice) {
  const Compiled small = compile(PartitionInstance{{2, 2, 3, 3}}, {});
  const int L = small.embedded.embedding.lattice.side();
  EmbedSettings s;
  s.lattice = chimera_spec(4, L + 2);
  const Compiled big = compile(PartitionInstance{{2, 2, 3, 3}}, s);
  EXPECT_EQ(big.embedded.embedding.lattice, chimera_spec(4, L + 2));
  EXPECT_TRUE(validate(big.embedded.embedding, interaction_graph(big.embedded.logical)).ok());
  EXPECT_TRUE(big.embedded.physical.approx_equal(small.embedded.physical));
  for (std::size_t i = 0; i < big.embedded.vertex_of.size(); ++i)
    EXPECT_EQ(big.embedded.slot(big.embedded.vertex_of[i]), static_cast<int>(i));

  s.lattice = chimera_spec(4, L - 1);
  try {
    compile(PartitionInstance{{2, 2, 3, 3}}, s);
    FAIL();
  } catch (const InfeasibleEmbedding& e) {
    EXPECT_NE(std::string(e.what()).find("requires L=" + std::to_string(L)),
              std::string::npos);
  }
  s.lattice = chimera_spec(2, 20);
  EXPECT_THROW(compile(UnaryRequest{4}, s), UnsupportedCell);
}

TEST(Pipeline, UnsupportedStrategyIsUsageError) {
  EXPECT_THROW(compile(ColoringInstance{Graph::complete(3), 3}, {Strategy::Tree}),
               DocumentError);
  EXPECT_THROW(compile(AdderRequest{2}, {Strategy::Tiles}), DocumentError);
  EXPECT_THROW(parse_strategy("spiral"), DocumentError);
  EXPECT_THROW(parse_solver("qpu"), DocumentError);
}

TEST(Pipeline, DecodesEveryInstanceType) {
  const std::vector<std::pair<ProblemInstance, Strategy>> cases{
      {KnapsackInstance{{3, 5, 7}, {2, 4, 1}, 5}, Strategy::Tree},
      {ColoringInstance{Graph{3, {{0, 1}, {1, 2}}}, 2}, Strategy::Tiles},
      {ColoringInstance{Graph::complete(3), 3}, Strategy::Complete},
      {HamcycleInstance{Graph::complete(3)}, Strategy::Tiles},
      {HamcycleInstance{Graph::complete(3)}, Strategy::Complete},
      {UnaryRequest{6}, Strategy::Tree},
      {UnaryRequest{3}, Strategy::Complete},
      {AdderRequest{2}, Strategy::Complete}};
  for (const auto& [inst, strategy] : cases) {
    EmbedSettings s;
    s.strategy = strategy;
    const CommandResult r = cmd_solve(instance_to_json(inst), s, {});
    EXPECT_EQ(r.exit_code, 0) << instance_kind(inst) << " " << strategy_name(strategy)
                              << "\n" << dump_json(r.doc);
    EXPECT_EQ(r.doc["broken_chains"], 0);
  }
}

TEST(Pipeline, KnapsackSolveFindsOptimum) {
  const KnapsackInstance k{{3, 5, 7}, {2, 4, 1}, 5};
  const CommandResult r = cmd_solve(instance_to_json(k), {}, {});
  EXPECT_EQ(r.doc["solution"]["value"], 12);
  EXPECT_EQ(r.doc["solution"]["items"], Json::array({1, 2}));
}

TEST(Pipeline, AnnealSolvesEmbeddedPartition) {
  SolveSettings a{SolverKind::Anneal, 1, 1000, 10};
  const CommandResult r =
      cmd_solve(instance_to_json(PartitionInstance{{4, 5, 6, 7, 8}}), {}, a);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.doc["solution"]["residual"], 0);
}

TEST(Pipeline, GapReports) {
  const Json g = cmd_gap(instance_to_json(ColoringInstance{Graph::complete(2), 4}));
  EXPECT_DOUBLE_EQ(g["assemblies"]["two_tile_horizontal"]["gap"].get<double>(), 2.0);
  EXPECT_EQ(g["mode"], "full");
  const Json q = cmd_gap(qubo_to_json(h_diag()));
  EXPECT_DOUBLE_EQ(q["gap"].get<double>(), 4.0);
  EXPECT_EQ(q["ground_count"], 4);
  EXPECT_THROW(cmd_gap(instance_to_json(UnaryRequest{3})), DocumentError);
}

TEST(Pipeline, CartoonReport) {
  const std::string t = cmd_cartoon(0, 4, ',');
  EXPECT_EQ(t.substr(0, t.find('\n')), "N,epsilon,gap,s_star,tau_linear,tau_optimal");
  EXPECT_NE(t.find("\n0,1,1,0.5,1,1\n"), std::string::npos);
  EXPECT_NE(t.find("\n4,0.0625,0.25,0.5,16,4\n"), std::string::npos);
  EXPECT_THROW(cmd_cartoon(3, 2), DocumentError);
}

}  // namespace
}  // namespace qlat
