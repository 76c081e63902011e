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
#include "qlat/numpart.hpp"

namespace qlat {
namespace {

// Number of selector patterns whose selected sum is exactly half the total.
std::uint64_t balanced_subsets(const std::vector<std::uint64_t>& n) {
  std::uint64_t total = 0, count = 0;
  for (auto v : n) total += v;
  if (total % 2) return 0;
  for (std::uint64_t mask = 0; mask < (1u << n.size()); ++mask) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (mask >> i & 1) s += n[i];
    count += 2 * s == total;
  }
  return count;
}

std::uint64_t knapsack_dp(const KnapsackInstance& k) {
  std::vector<std::uint64_t> best(k.capacity + 1, 0);
  for (int i = 0; i < k.N(); ++i)
    for (std::uint64_t c = k.capacity + 1; c-- > k.weights[i];)
      best[c] = std::max(best[c], best[c - k.weights[i]] + k.values[i]);
  return best[k.capacity];
}

double max_coefficient(const Qubo& q) {
  double m = 0;
  for (auto [i, c] : q.linear()) m = std::max(m, std::abs(c));
  for (auto [ij, c] : q.quadratic()) m = std::max(m, std::abs(c));
  return m;
}

TEST(Numpart, TwoTwoThreeThree) {
  const PartitionInstance inst{{2, 2, 3, 3}};
  const SummationTreeQubo t = build_numpart_qubo(inst);
  EXPECT_FALSE(t.infeasible);
  const Spectrum s = brute_force(t.qubo);
  EXPECT_NEAR(s.ground_energy, 0.0, kTol);
  EXPECT_EQ(s.state_count_at_ground, 4u);
  for (const auto& x : s.ground_states) {
    const PartitionDecoding d = decode_partition(inst, t, x);
    EXPECT_TRUE(d.balanced);
    EXPECT_EQ(d.sum_a, 5u);
    EXPECT_EQ(d.set_a.size(), 2u);
  }
}

TEST(Numpart, OneOne) {
  const PartitionInstance inst{{1, 1}};
  const SummationTreeQubo t = build_numpart_qubo(inst);
  EXPECT_EQ(t.levels, 1);
  EXPECT_EQ(t.nodes.size(), 1u);
  const Spectrum s = brute_force(t.qubo);
  EXPECT_EQ(s.state_count_at_ground, 2u);
  for (const auto& x : s.ground_states)
    EXPECT_EQ(x[t.selectors[0]] + x[t.selectors[1]], 1);
}

TEST(Numpart, OddTotalIsFlagged) {
  const PartitionInstance inst{{1, 2, 4}};
  const SummationTreeQubo t = build_numpart_qubo(inst);
  EXPECT_TRUE(t.infeasible);
  EXPECT_GT(brute_force(t.qubo).ground_energy, 0.5);
  const PartitionDecoding d =
      decode_partition(inst, t, Assignment(t.qubo.num_vars(), 0));
  EXPECT_EQ(d.residual, 7u);
  EXPECT_FALSE(d.balanced);
  EXPECT_THROW(build_numpart_qubo(PartitionInstance{{3}}), InvalidParameter);
}

TEST(Numpart, GroundCountMatchesSubsetOracle) {
  testing::Gen g(51);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<std::uint64_t> n(g.uniform_int(2, 4));
    for (auto& v : n) v = g.uniform_int(1, 7);
    const PartitionInstance inst{n};
    const SummationTreeQubo t = build_numpart_qubo(inst);
    const Spectrum s = eliminate(t.qubo);
    const std::uint64_t expect = balanced_subsets(n);
    if (expect == 0) {
      EXPECT_GT(s.ground_energy, 0.5);
    } else {
      EXPECT_NEAR(s.ground_energy, 0.0, kTol);
      EXPECT_EQ(s.state_count_at_ground, expect);
      const AnnealResult r = exact_minimize(t.qubo);
      EXPECT_TRUE(decode_partition(inst, t, r.assignment).balanced);
    }
  }
}

TEST(Numpart, RegisterWidthPerLevel) {
  for (int m = 1; m <= 4; ++m)
    for (std::uint64_t top : {1u, 5u, 7u}) {
      PartitionInstance inst{std::vector<std::uint64_t>(std::size_t{1} << m, 1)};
      inst.numbers[0] = top;
      inst.numbers[1] = top % 2 ? 1 : 2;
      const SummationTreeQubo t = build_numpart_qubo(inst);
      for (const SumNode& node : t.nodes)
        EXPECT_EQ(static_cast<int>(node.registers[0].size()),
                  inst.M() + (m - node.level));
    }
}

TEST(Numpart, CoefficientsBounded) {
  testing::Gen g(52);
  for (int N : {2, 4, 8, 16, 32})
    for (int M = 1; M <= 8; ++M) {
      std::vector<std::uint64_t> n(N);
      for (auto& v : n) v = g.uniform_int(1, (1 << M) - 1);
      if (PartitionInstance{n}.total() % 2) n[0] = n[0] == 1 ? 2 : n[0] - 1;
      const SummationTreeQubo t = build_numpart_qubo(PartitionInstance{n});
      EXPECT_LE(max_coefficient(t.qubo), 16.0) << N << " " << M;
      KnapsackInstance k{n, n, static_cast<std::uint64_t>(g.uniform_int(1, 50))};
      const int w = knapsack_value_width(k);
      EXPECT_LE(max_coefficient(build_knapsack_qubo(k, w - 1).qubo), 16.0);
    }
}

TEST(Numpart, Predictions) {
  EXPECT_DOUBLE_EQ(predicted_numpart_length(16, 2, 4, NumpartStrategy::Tree), 64);
  EXPECT_DOUBLE_EQ(predicted_numpart_length(16, 2, 4, NumpartStrategy::Linear), 56);
  EXPECT_DOUBLE_EQ(predicted_numpart_length(4, 1, 4, NumpartStrategy::Tree), 26);
  EXPECT_DOUBLE_EQ(predicted_knapsack_length(16, 3, 3, 4), 98);
  EXPECT_DOUBLE_EQ(predicted_knapsack_length(4, 1, 1, 4), 33);
  EXPECT_DOUBLE_EQ(predicted_knapsack_length(9, 0, 0, 3), 50);
}

TEST(NumpartEmbedding, WithinBound) {
  testing::Gen g(53);
  for (int N : {2, 3, 4, 5, 8, 16, 32, 64})
    for (int M : {1, 2, 4})
      for (int J : {2, 4, 8}) {
        std::vector<std::uint64_t> n(N);
        for (auto& v : n) v = g.uniform_int(1, (1 << M) - 1);
        n[0] = (1 << M) - 1;
        if (PartitionInstance{n}.total() % 2) n[1] = n[1] == 1 ? 2 : n[1] - 1;
        const PartitionInstance inst{n};
        const SumEmbedding e = embed_numpart(inst, J);
        const int L = e.layout.embedding.lattice.side();
        EXPECT_LE(L, predicted_numpart_length(N, inst.M(), J, NumpartStrategy::Tree))
            << N << " " << M << " " << J;
      }
  const SumEmbedding e = embed_numpart(PartitionInstance{{3, 1, 2, 2}}, 4);
  EXPECT_LE(e.layout.embedding.lattice.side(), 32);
}

TEST(NumpartEmbedding, PreservesGroundEnergy) {
  for (const auto& n : std::vector<std::vector<std::uint64_t>>{
           {1, 1}, {1, 3}, {3, 1, 1, 1}, {2, 1, 1}}) {
    const PartitionInstance inst{n};
    const SumEmbedding e = embed_numpart(inst, 4);
    const AnnealResult r = exact_minimize(e.embedded.physical);
    const double logical = eliminate(e.tree.qubo).ground_energy;
    EXPECT_NEAR(r.energy, logical, 1e-6);
    const Unembedded u = unembed(e.embedded, r.assignment);
    EXPECT_EQ(u.broken_chains, 0);
    EXPECT_NEAR(e.tree.qubo.evaluate(u.logical), logical, 1e-6);
    EXPECT_EQ(decode_partition(inst, e.tree, u.logical).balanced,
              balanced_subsets(n) > 0);
  }
}

TEST(Knapsack, Examples) {
  {
    const KnapsackInstance k{{1, 1}, {1, 1}, 1};
    const SummationTreeQubo t = build_knapsack_qubo(k, 0);
    const Spectrum s = brute_force(t.qubo);
    EXPECT_NEAR(s.ground_energy, 0.0, kTol);
    EXPECT_EQ(s.state_count_at_ground, 2u);
    for (const auto& x : s.ground_states)
      EXPECT_EQ(decode_knapsack(k, t, x).items.size(), 1u);
  }
  {
    const KnapsackInstance k{{2, 3, 1}, {1, 1, 1}, 2};
    const SummationTreeQubo t = build_knapsack_qubo(k, 2);
    const AnnealResult r = exact_minimize(t.qubo);
    EXPECT_NEAR(r.energy, 0.0, kTol);
    const KnapsackDecoding d = decode_knapsack(k, t, r.assignment);
    EXPECT_EQ(d.items, (std::vector<int>{0, 1}));
    EXPECT_TRUE(d.within_capacity);
  }
  {
    const KnapsackInstance k{{1, 2}, {1, 1}, 3};
    EXPECT_GT(eliminate(build_knapsack_qubo(k, 2).qubo).ground_energy, 0.5);
    EXPECT_THROW(build_knapsack_qubo(k, 9), InvalidParameter);
  }
}

TEST(Knapsack, WindowMatchesSubsetOracle) {
  testing::Gen g(54);
  for (int trial = 0; trial < 60; ++trial) {
    KnapsackInstance k;
    const int N = g.uniform_int(1, 4);
    for (int i = 0; i < N; ++i) {
      k.values.push_back(g.uniform_int(1, 7));
      k.weights.push_back(g.uniform_int(1, 7));
    }
    k.capacity = g.uniform_int(0, 20);
    const int width = knapsack_value_width(k);
    for (int l = 0; l < width; ++l) {
      bool expect = false;
      for (std::uint64_t mask = 0; mask < (1u << N); ++mask) {
        std::uint64_t v = 0, w = 0;
        for (int i = 0; i < N; ++i)
          if (mask >> i & 1) v += k.values[i], w += k.weights[i];
        expect |= w <= k.capacity && v >= (1u << l) && v < (2u << l);
      }
      const double e = eliminate(build_knapsack_qubo(k, l).qubo).ground_energy;
      EXPECT_EQ(e < 0.5, expect) << trial << " l=" << l;
    }
  }
}

TEST(Knapsack, SweepMatchesDp) {
  testing::Gen g(55);
  const QuboSolver exact = [](const Qubo& q) { return exact_minimize(q); };
  for (int trial = 0; trial < 60; ++trial) {
    KnapsackInstance k;
    const int N = g.uniform_int(1, 4);
    for (int i = 0; i < N; ++i) {
      k.values.push_back(g.uniform_int(1, 7));
      k.weights.push_back(g.uniform_int(1, 7));
    }
    k.capacity = g.uniform_int(0, 20);
    const SweepResult r = knapsack_sweep(k, exact);
    EXPECT_EQ(r.best.value, knapsack_dp(k)) << trial;
    EXPECT_TRUE(r.best.within_capacity);
  }
  const KnapsackInstance all{{1, 2, 3}, {1, 1, 1}, 10};
  EXPECT_EQ(knapsack_sweep(all, exact).best.items, (std::vector<int>{0, 1, 2}));
  const KnapsackInstance none{{1, 2, 3}, {1, 1, 1}, 0};
  const SweepResult z = knapsack_sweep(none, exact);
  EXPECT_TRUE(z.best.items.empty());
  EXPECT_EQ(z.best.value, 0u);
}

TEST(Knapsack, ReferenceFormMatchesDp) {
  testing::Gen g(56);
  for (int trial = 0; trial < 40; ++trial) {
    KnapsackInstance k;
    const int N = g.uniform_int(1, 5);
    for (int i = 0; i < N; ++i) {
      k.values.push_back(g.uniform_int(1, 7));
      k.weights.push_back(g.uniform_int(1, 7));
    }
    k.capacity = g.uniform_int(0, 25);
    const Qubo q = build_knapsack_reference(k, 8.0 * N);
    EXPECT_NEAR(-brute_force(q).ground_energy,
                static_cast<double>(knapsack_dp(k)), kTol);
  }
}

TEST(KnapsackEmbedding, Validates) {
  const KnapsackInstance k{{5, 3, 6, 2, 7}, {2, 4, 3, 1, 5}, 9};
  const SumEmbedding e = embed_knapsack(k, 3, 4);
  EXPECT_TRUE(validate(e.layout.embedding, interaction_graph(e.tree.qubo)).ok());
  EXPECT_LE(e.layout.embedding.lattice.side(),
            predicted_knapsack_length(8, k.value_bits(), k.weight_bits(), 4));
}

}  // namespace
}  // namespace qlat
