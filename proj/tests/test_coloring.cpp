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
#include "qlat/coloring.hpp"

namespace qlat {
namespace {

Graph graph(int n, std::vector<Edge> edges) {
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

std::vector<Graph> all_graphs(int n) {
  std::vector<Edge> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::uint32_t m = 0; m < (1u << pairs.size()); ++m) {
    Graph g;
    g.n = n;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (m >> k & 1) g.edges.push_back(pairs[k]);
    out.push_back(g);
  }
  return out;
}

TEST(HDiag, FourGroundStatesGapFour) {
  auto s = testing::naive_spectrum(h_diag());
  ASSERT_EQ(s.ground_states.size(), 4u);
  EXPECT_DOUBLE_EQ(s.gap, 4.0);
  for (const auto& g : s.ground_states) {
    int matched = 0, plus = 0;
    for (int i = 0; i < 4; ++i) {
      matched += g[i] == 1 && g[4 + i] == 1;
      plus += (g[i] == 1) + (g[4 + i] == 1);
    }
    EXPECT_EQ(matched, 1);
    EXPECT_EQ(plus, 2);
  }
}

TEST(HOff, MatchesSumForm) {
  auto h = h_off();
  for (std::uint64_t m = 0; m < 256; ++m) {
    auto x = testing::decode_mask(m, 8, Domain::Spin);
    int S = x[0] + x[1] + x[2] + x[3];
    int R = x[4] + x[5] + x[6] + x[7];
    EXPECT_DOUBLE_EQ(h.evaluate(x), (S + 4) * (R + 4) / 2.0 - 8.0);
  }
  Assignment down(8, -1);
  EXPECT_DOUBLE_EQ(h.evaluate(down), -8.0);
  auto s = testing::naive_spectrum(h);
  EXPECT_DOUBLE_EQ(s.ground, -8.0);
  Assignment two = down;
  two[0] = 1;
  two[4] = 1;
  EXPECT_DOUBLE_EQ(h.evaluate(two), -6.0);
}

TEST(TileSet, PaperCoefficientsAndShape) {
  auto t4 = build_tileset(4);
  EXPECT_EQ(t4.tile_side, 1);
  EXPECT_DOUBLE_EQ(t4.coef.lambda, 0.5);
  EXPECT_DOUBLE_EQ(t4.coef.G, 0.5);
  EXPECT_EQ(t4.tiles.vertex_tile.qubo.num_vars(), 8);
  // Template equals half of H_diag on the single cell.
  auto half = h_diag();
  half.scale(0.5);
  for (std::uint64_t m = 0; m < 256; ++m) {
    auto x = testing::decode_mask(m, 8, Domain::Spin);
    Assignment y(8);
    for (int k = 0; k < 8; ++k) y[k] = x[t4.tiles.vertex_tile.sites[k].a];
    EXPECT_DOUBLE_EQ(t4.tiles.vertex_tile.qubo.evaluate(y), half.evaluate(x));
  }
  auto t8 = build_tileset(8);
  EXPECT_EQ(t8.tile_side, 2);
  EXPECT_NEAR(t8.coef.lambda, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(t8.coef.G, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(t8.tiles.vertex_tile.qubo.num_vars(), 32);
  auto t3 = build_tileset(3);
  EXPECT_EQ(t3.tiles.vertex_tile.qubo.num_vars(), 6);
  EXPECT_EQ(t3.tiles.edge_horizontal.qubo.num_vars(), 6);
  EXPECT_THROW(build_tileset(1), InvalidParameter);
}

TEST(TileSet, CoefficientsAreSmallRationals) {
  for (int q : {2, 3, 4, 5, 8, 12}) {
    auto c = compile_coloring({Graph::complete(3), q});
    for (auto [pq, v] : c.embedded.physical.quadratic()) {
      EXPECT_NEAR(v * 6, std::round(v * 6), 1e-9);
      EXPECT_LE(std::abs(v), 1.0);
    }
    for (auto [i, v] : c.embedded.physical.linear()) {
      EXPECT_NEAR(v * 6, std::round(v * 6), 1e-9);
      EXPECT_LE(std::abs(v), 2.0);
    }
  }
}

TEST(VerifyGap, QuotedValues) {
  auto t4 = build_tileset(4);
  EXPECT_DOUBLE_EQ(verify_gap(t4, Assembly::OneTile).gap, 2.0);
  EXPECT_DOUBLE_EQ(verify_gap(t4, Assembly::TwoTileHorizontal).gap, 2.0);
  EXPECT_DOUBLE_EQ(verify_gap(t4, Assembly::TwoTileVertical).gap, 2.0);
  EXPECT_DOUBLE_EQ(verify_gap(t4, Assembly::Chain).gap, 2.0);
  auto t8 = build_tileset(8);
  for (auto mode : {GapMode::ChainIntact, GapMode::Full}) {
    EXPECT_NEAR(verify_gap(t8, Assembly::TwoTileHorizontal, mode).gap, 4.0 / 3.0, 1e-9);
    EXPECT_NEAR(verify_gap(t8, Assembly::TwoTileVertical, mode).gap, 4.0 / 3.0, 1e-9);
    EXPECT_NEAR(verify_gap(t8, Assembly::OneTile, mode).gap, 4.0 / 3.0, 1e-9);
  }
  auto t3 = build_tileset(3);
  EXPECT_DOUBLE_EQ(verify_gap(t3, Assembly::TwoTileHorizontal).gap, 2.0);
  for (int q : {2, 3, 4, 5, 6, 8})
    for (auto a : {Assembly::OneTile, Assembly::TwoTileHorizontal, Assembly::Chain}) {
      auto t = build_tileset(q);
      EXPECT_NEAR(verify_gap(t, a, GapMode::ChainIntact).gap, expected_gap(t, a), 1e-9)
          << q;
    }
}

TEST(VerifyGap, EdgeGroundStatesAreProperColorings) {
  auto t = build_tileset(4);
  auto s = verify_gap(t, Assembly::TwoTileHorizontal);
  EXPECT_EQ(s.ground_states.size(), 12u);
}

TEST(Compile, TriangleThreeColors) {
  auto c = compile_coloring({Graph::complete(3), 3});
  auto s = brute_force(c.embedded.logical);
  EXPECT_EQ(s.ground_states.size(), 6u);
  EXPECT_NEAR(s.ground_energy, feasible_energy(c), 1e-9);
  std::set<std::vector<int>> seen;
  for (const auto& g : s.ground_states) {
    auto col = decode_coloring(c, g);
    ASSERT_TRUE(col.has_value());
    EXPECT_NE((*col)[0], (*col)[1]);
    EXPECT_NE((*col)[1], (*col)[2]);
    EXPECT_NE((*col)[0], (*col)[2]);
    seen.insert(*col);
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Compile, SingleVertexFourColors) {
  auto c = compile_coloring({graph(1, {}), 4});
  auto s = brute_force(c.embedded.physical);
  EXPECT_EQ(s.ground_states.size(), 4u);
}

TEST(Compile, EdgeWithOneColorIsInfeasible) {
  auto c = compile_coloring({graph(2, {{0, 1}}), 1});
  auto s = brute_force(c.embedded.physical);
  EXPECT_GT(s.ground_energy, feasible_energy(c) + 1e-9);
}

TEST(Compile, GroundCountEqualsColoringCount) {
  for (int n = 1; n <= 4; ++n)
    for (const auto& g : all_graphs(n))
      for (int q = 1; q <= 4; ++q) {
        auto c = compile_coloring({g, q});
        auto proper = count_proper_colorings(g, q);
        BruteForceOptions opt;
        opt.max_stored_states = 1 << 20;
        auto s = brute_force(c.embedded.logical, opt);
        double level = feasible_energy(c);
        std::uint64_t at_level =
            std::abs(s.ground_energy - level) < 1e-9 ? s.state_count_at_ground : 0;
        EXPECT_EQ(at_level, proper) << "n=" << n << " q=" << q;
        EXPECT_GE(s.ground_energy, level - 1e-9);
      }
}

TEST(Compile, PhysicalSpaceAgreesOnSmallInstances) {
  for (int n = 1; n <= 3; ++n)
    for (const auto& g : all_graphs(n))
      for (int q = 1; q <= 3; ++q) {
        auto c = compile_coloring({g, q});
        if (c.embedded.physical.num_vars() > 24) continue;
        auto s = brute_force(c.embedded.physical);
        auto l = brute_force(c.embedded.logical);
        EXPECT_NEAR(s.ground_energy, l.ground_energy, 1e-9);
        if (count_proper_colorings(g, q) == 0) continue;
        for (const auto& x : s.ground_states)
          EXPECT_EQ(unembed(c.embedded, x).broken_chains, 0);
      }
}

TEST(Compile, ReferenceQuboCountsColorings) {
  ColoringInstance inst{Graph::complete(3), 3};
  auto s = brute_force(coloring_reference_qubo(inst));
  EXPECT_DOUBLE_EQ(s.ground_energy, 0.0);
  EXPECT_EQ(s.ground_states.size(), 6u);
}

TEST(GridSearch, Le4FindsPaperTable) {
  auto r = grid_search_coefficients(QClass::Le4, 5);
  EXPECT_NEAR(r.best_gap, 2.0, 1e-9);
  ColoringCoefficients paper;
  bool found = false;
  for (const auto& c : r.optimal)
    found |= c.A == 1.0 && c.B == -2.0 && c.C == 2.0 && c.lambda == 0.5 && c.G == 0.5;
  EXPECT_TRUE(found);
  for (const auto& p : r.evaluated) EXPECT_LE(p.gap, 2.0 + 1e-9);
}

TEST(GridSearch, BudgetExcludesLargeFields) {
  ColoringCoefficients c;
  c.C = 2.5;
  EXPECT_FALSE(within_budget(4, c));
  c = ColoringCoefficients{};
  EXPECT_TRUE(within_budget(4, c));
  c.G = 1.0;  // lambda C + 2G = 3 on a tile with two neighbors
  EXPECT_FALSE(within_budget(4, c));
  EXPECT_TRUE(within_budget(8, paper_coefficients(8)));
}

TEST(GridSearch, Gt4BudgetSurface) {
  // Coarse grid: lambda in {1/3, 2/3, 1}; only 2/3 is feasible with gap 4/3.
  auto coarse = grid_search_coefficients(QClass::Gt4, 4);
  EXPECT_NEAR(coarse.best_gap, 4.0 / 3.0, 1e-9);
  EXPECT_NEAR(coarse.best.lambda, 2.0 / 3.0, 1e-9);
  // Finer grids expose min(2 lambda, 4G) peaking at lambda = 0.8.
  auto fine = grid_search_coefficients(QClass::Gt4, 11);
  for (const auto& p : fine.evaluated)
    EXPECT_NEAR(p.gap, std::min(2 * p.coef.lambda, 4 * p.coef.G), 1e-9);
  EXPECT_NEAR(fine.best_gap, 1.6, 1e-9);
}

}  // namespace
}  // namespace qlat
