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

// Acceptance checks, one line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "qlat/adder.hpp"
#include "qlat/cartoon.hpp"
#include "qlat/coloring.hpp"
#include "qlat/hamcycle.hpp"
#include "qlat/lattice.hpp"
#include "qlat/numpart.hpp"
#include "qlat/pipeline.hpp"
#include "qlat/unary.hpp"

namespace {

using namespace qlat;

constexpr double kExact = 1e-9;   // rational identities
constexpr double kCoef = 1e-12;   // normalized coefficient bounds
constexpr int kSoundnessVars = 24;
constexpr int kKnapsackTrials = 200;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_.empty()) first_ = what;
    pass_ = pass_ && ok;
  }
  Outcome done(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " [" << checks_ << " checks]";
    if (!pass_) s << " first failure: " << first_;
    return {pass_, s.str()};
  }

 private:
  bool pass_ = true;
  int checks_ = 0;
  std::string first_;
};

std::string str(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

std::vector<Graph> all_graphs(int n) {
  std::vector<Edge> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::uint32_t m = 0; m < (1u << pairs.size()); ++m) {
    Graph g{n, {}};
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (m >> k & 1) g.edges.push_back(pairs[k]);
    out.push_back(g);
  }
  return out;
}

double max_abs_coefficient(const Qubo& q) {
  double m = 0;
  for (auto [i, c] : q.linear()) m = std::max(m, std::abs(c));
  for (auto [ij, c] : q.quadratic()) m = std::max(m, std::abs(c));
  return m;
}

Outcome lattice_counts() {
  Tally t;
  for (int L : {1, 2, 4, 16}) {
    const LatticeGraph g(chimera_spec(4, L));
    t.expect(g.num_vertices() == 8 * L * L, "vertices L=" + std::to_string(L));
    t.expect(g.num_edges() == 16 * L * L + 8 * L * (L - 1),
             "edges L=" + std::to_string(L));
  }
  return t.done("chimera(4,L) vertices 8L^2, edges 16L^2+8L(L-1), L in {1,2,4,16}");
}

Outcome complete_embeddings() {
  Tally t;
  for (int N = 1; N <= 16; ++N) {
    const MinorEmbedding e = embed_complete_chimera(N, 4);
    t.expect(e.lattice.side() == (N + 3) / 4, "side N=" + std::to_string(N));
    t.expect(validate(e, Graph::complete(N)).ok(), "validate N=" + std::to_string(N));
  }
  t.expect(embed_complete_chimera(8, 4).lattice == chimera_spec(4, 2), "K8 on L=2");
  return t.done("K_N validates on L=ceil(N/4) for N<=16; K8 on L=2");
}

Outcome unary_oracle() {
  Tally t;
  double min_gap_seen = 1e9;
  for (int N = 2; N <= 8; ++N) {
    const UnaryTreeQubo u = build_unary_qubo(N);
    const Spectrum s = brute_force(u.qubo);
    std::set<Assignment> got, want;
    for (const auto& gs : s.ground_states) {
      Assignment a;
      for (int k = 0; k < N; ++k) a.push_back(gs[u.leaf_index[k]]);
      got.insert(a);
    }
    for (int k = 0; k < N; ++k) {
      Assignment a(N, 0);
      a[k] = 1;
      want.insert(a);
    }
    t.expect(!s.truncated && got == want, "one-hot projection N=" + std::to_string(N));
    t.expect(s.gap >= 1.0 - kExact, "gap N=" + std::to_string(N));
    min_gap_seen = std::min(min_gap_seen, s.gap);
  }
  const int sides[] = {fractal_embed_unary(4, 4).layout.L,
                       fractal_embed_unary(16, 4).layout.L,
                       fractal_embed_unary(64, 4).layout.L};
  t.expect(sides[0] == 1 && sides[1] == 3 && sides[2] == 7, "sides {1,3,7}");
  const FractalUnary big = fractal_embed_unary(256, 4);
  t.expect(big.layout.L == 15, "L=15 at N=256");
  t.expect(validate(big.embedding, interaction_graph(big.logical)).ok(),
           "N=256 layout validates");
  return t.done("N=2..8 leaves one-hot, min gap " + str(min_gap_seen) + "; sides " +
                std::to_string(sides[0]) + "," + std::to_string(sides[1]) + "," +
                std::to_string(sides[2]) + "; N=256 L=" + std::to_string(big.layout.L));
}

Outcome k22_gadget_check() {
  Tally t;
  const Qubo g = k22_gadget(0, 1, 2, 3);
  Qubo ref(3, Domain::Spin);
  const std::pair<int, double> terms[] = {{0, 1.0}, {1, -1.0}, {2, -1.0}};
  ref.add_square(1.0, -1.0, terms);
  const Spectrum gs = brute_force(g);
  const Spectrum rs = brute_force(ref);
  t.expect(gs.states_enumerated == 16, "16 states");
  std::set<Assignment> projected;
  for (const auto& a : gs.ground_states) projected.insert({a[0], a[1], a[2]});
  t.expect(projected == std::set<Assignment>(rs.ground_states.begin(), rs.ground_states.end()),
           "ground projection");
  return t.done("ground projection equals (s_z-s_x-s_y-1)^2 ground set (" +
                std::to_string(projected.size()) + " states)");
}

Outcome adder_check() {
  Tally t;
  int pairs = 0;
  for (int n = 1; n <= 3; ++n) {
    const AdderQubo a = build_adder(n);
    auto fix = [&](const std::string& who, int width, std::uint64_t v,
                   std::vector<std::pair<int, int>>& out) {
      for (int j = 0; j < width; ++j)
        out.emplace_back(a.roles.at(who + ":" + std::to_string(j)),
                         static_cast<int>(v >> j & 1));
    };
    for (std::uint64_t x1 = 0; x1 < (1u << n); ++x1)
      for (std::uint64_t x2 = 0; x2 < (1u << n); ++x2) {
        ++pairs;
        std::vector<std::pair<int, int>> fixed;
        fix("x1", n, x1, fixed);
        fix("x2", n, x2, fixed);
        const Clamped c = clamp(a.qubo, fixed);
        const Spectrum s = brute_force(c.qubo);
        const std::string tag = std::to_string(x1) + "+" + std::to_string(x2);
        t.expect(s.state_count_at_ground == 1, "unique completion " + tag);
        t.expect(std::abs(s.ground_energy) < kExact, "zero energy " + tag);
        std::uint64_t y = 0;
        for (int j = 0; j <= n; ++j) {
          const int id = c.new_id[a.roles.at("y:" + std::to_string(j))];
          if (!s.ground_states.empty() && s.ground_states[0][id] == 1) y |= 1u << j;
        }
        t.expect(y == x1 + x2, "sum " + tag);
      }
  }
  const double ref = max_abs_coefficient(build_adder(2).qubo);
  double worst = 0;
  for (int n = 1; n <= 8; ++n) {
    const double m = max_abs_coefficient(build_adder(n).qubo);
    worst = std::max(worst, m);
    t.expect(n == 1 ? m <= ref : m == ref, "max |coef| at n=" + std::to_string(n));
  }
  return t.done(std::to_string(pairs) + " input pairs for n<=3 add correctly with unique ground; max |coef| " +
                str(worst) + " for n=1..8");
}

Outcome partition_grid() {
  Tally t;
  int yes = 0, total = 0;
  for (int a = 1; a <= 7; ++a)
    for (int b = 1; b <= 7; ++b)
      for (int c = 1; c <= 7; ++c)
        for (int d = 1; d <= 7; ++d) {
          const std::vector<std::uint64_t> n{std::uint64_t(a), std::uint64_t(b),
                                             std::uint64_t(c), std::uint64_t(d)};
          bool balanced = false;
          const std::uint64_t sum = a + b + c + d;
          for (int m = 0; m < 16; ++m) {
            std::uint64_t s = 0;
            for (int i = 0; i < 4; ++i)
              if (m >> i & 1) s += n[i];
            balanced |= 2 * s == sum;
          }
          const PartitionInstance inst{n};
          const SummationTreeQubo tree = build_numpart_qubo(inst);
          const AnnealResult r = exact_minimize(tree.qubo);
          const bool zero = std::abs(r.energy) < kExact;
          const std::string tag = std::to_string(a) + "," + std::to_string(b) + "," +
                                  std::to_string(c) + "," + std::to_string(d);
          t.expect(zero == balanced, "ground 0 iff balanced " + tag);
          if (balanced) {
            ++yes;
            t.expect(decode_partition(inst, tree, r.assignment).residual == 0,
                     "residual " + tag);
          }
          ++total;
        }
  return t.done(std::to_string(total) + " ordered instances in [1,7]^4, " +
                std::to_string(yes) + " balanced, all decode to residual 0");
}

Outcome knapsack_dp_check() {
  Tally t;
  testing::Gen g(2026);
  const QuboSolver exact = [](const Qubo& q) { return exact_minimize(q); };
  for (int trial = 0; trial < kKnapsackTrials; ++trial) {
    KnapsackInstance k;
    const int N = g.uniform_int(1, 4);
    for (int i = 0; i < N; ++i) {
      k.values.push_back(g.uniform_int(1, 7));
      k.weights.push_back(g.uniform_int(1, 7));
    }
    k.capacity = g.uniform_int(0, 7 * N);
    std::vector<std::uint64_t> best(k.capacity + 1, 0);
    for (int i = 0; i < N; ++i)
      for (std::uint64_t c = k.capacity + 1; c-- > k.weights[i];)
        best[c] = std::max(best[c], best[c - k.weights[i]] + k.values[i]);
    const SweepResult r = knapsack_sweep(k, exact);
    t.expect(r.best.value == best[k.capacity] && r.best.within_capacity,
             "trial " + std::to_string(trial));
  }
  return t.done(std::to_string(kKnapsackTrials) + " random instances match the DP optimum");
}

Outcome coloring_gaps() {
  Tally t;
  const Spectrum hd = brute_force(h_diag());
  t.expect(hd.states_enumerated == 256, "256 states");
  t.expect(std::abs(hd.gap - 4.0) < kExact, "H_diag gap 4");
  const double g4 = verify_gap(build_tileset(4), Assembly::TwoTileHorizontal).gap;
  t.expect(std::abs(g4 - 2.0) < kExact, "q=4 two-tile gap 2");
  const double g8 =
      verify_gap(build_tileset(8), Assembly::TwoTileHorizontal, GapMode::ChainIntact).gap;
  t.expect(std::abs(g8 - 4.0 / 3.0) < kExact, "q=8 chain-intact gap 4/3");
  const GridSearchResult r = grid_search_coefficients(QClass::Le4, 5);
  bool found = false;
  for (const auto& c : r.optimal)
    found |= c.A == 1.0 && c.B == -2.0 && c.C == 2.0 && c.lambda == 0.5;
  t.expect(std::abs(r.best_gap - 2.0) < kExact && found, "grid search paper table");
  return t.done("H_diag " + str(hd.gap) + ", q=4 two-tile " + str(g4) + ", q=8 " +
                str(g8) + ", grid best " + str(r.best_gap) +
                (found ? " with A=1,B=-2,C=2,lambda=1/2" : ""));
}

Outcome coloring_oracle() {
  Tally t;
  int cases = 0;
  for (int n = 1; n <= 4; ++n)
    for (const Graph& g : all_graphs(n))
      for (int q = 1; q <= 4; ++q) {
        const CompiledColoring c = compile_coloring({g, q});
        BruteForceOptions opt;
        opt.max_stored_states = 0;
        // One value per chain: the contracted logical QUBO.
        const Spectrum s = brute_force(c.embedded.logical, opt);
        const double level = feasible_energy(c);
        const std::uint64_t at_level =
            std::abs(s.ground_energy - level) < kExact ? s.state_count_at_ground : 0;
        t.expect(at_level == count_proper_colorings(g, q) && s.ground_energy >= level - kExact,
                 "n=" + std::to_string(n) + " q=" + std::to_string(q));
        ++cases;
      }
  return t.done(std::to_string(cases) + " (graph, q) pairs: ground count equals proper colorings");
}

Outcome hamcycle_check() {
  Tally t;
  int graphs = 0, with_cycle = 0;
  for (const Graph& g : all_graphs(4)) {
    const ICQubo ic = build_ic_qubo({g});
    const Spectrum s = brute_force(ic.qubo);
    const bool has = !hamiltonian_cycles(g).empty();
    t.expect((std::abs(s.ground_energy) < kExact) == has, "IC graph " + std::to_string(graphs));
    with_cycle += has;
    ++graphs;
  }
  const double table[2][2][2] = {{{0, 0}, {0, 1}}, {{2, 0.5}, {0.5, 0}}};
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        Qubo q(3);
        add_and_gadget(q, 0, 1, 2);
        const int a[] = {z, x, y};
        t.expect(and_gadget(z, x, y) == table[z][x][y] && q.evaluate(a) == table[z][x][y],
                 "AND z=" + std::to_string(z) + " x=" + std::to_string(x) +
                     " y=" + std::to_string(y));
      }
  const TileHamcycleQubo k3 = build_tileable_hamcycle({Graph::complete(3)});
  const std::vector<int> cycle{0, 1, 2};
  Assignment st = tileable_hamcycle_state(k3, cycle);
  t.expect(std::abs(k3.qubo.evaluate(st)) < kExact, "K3 cycle state energy 0");
  double min_flip = 1e9;
  for (std::size_t i = 0; i < st.size(); ++i) {
    st[i] ^= 1;
    min_flip = std::min(min_flip, k3.qubo.evaluate(st));
    st[i] ^= 1;
  }
  t.expect(min_flip > kExact, "K3 one-flip neighbours positive");
  const double bound = tileable_hamcycle_bound(45, 7);
  const double baseline = complete_hamcycle_length(45);
  t.expect(bound == 490.0, "L=490 at N=45, L_G=7");
  t.expect(bound < baseline, "tileable below complete baseline");
  return t.done(std::to_string(graphs) + " graphs N=4 (" + std::to_string(with_cycle) +
                " Hamiltonian); AND table exact; K3 state 0, min 1-flip " + str(min_flip) +
                "; L=" + str(bound) + " vs complete baseline " + str(baseline));
}

struct SoundnessCase {
  std::string name;
  EmbeddedQubo embedded;
  bool check_chains = true;
};

std::vector<SoundnessCase> soundness_cases() {
  std::vector<SoundnessCase> out;
  auto add = [&](std::string name, EmbeddedQubo e, bool chains = true) {
    if (e.physical.num_vars() <= kSoundnessVars)
      out.push_back({std::move(name), std::move(e), chains});
  };
  testing::Gen g(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int J = g.uniform_int(1, 4);
    const int N = g.uniform_int(2, 6);
    const Domain d = trial % 2 ? Domain::Spin : Domain::Binary;
    add("random K" + std::to_string(N) + " J=" + std::to_string(J),
        embed_qubo(g.qubo(N, d, 0.6), embed_complete_chimera(N, J)));
  }
  for (int N = 2; N <= 4; ++N) {
    add("unary tree N=" + std::to_string(N), compile(UnaryRequest{N}, {Strategy::Tree}).embedded);
    add("unary complete N=" + std::to_string(N),
        compile(UnaryRequest{N}, {Strategy::Complete}).embedded);
  }
  add("adder n=1", compile(AdderRequest{1}, {Strategy::Complete}).embedded);
  for (const auto& n : std::vector<std::vector<std::uint64_t>>{
           {1, 1}, {1, 2}, {2, 2}, {3, 3}, {2, 5}, {7, 7}})
    for (Strategy s : {Strategy::Tree, Strategy::Complete})
      add("partition " + strategy_name(s), compile(PartitionInstance{n}, {s}).embedded);
  for (const KnapsackInstance& k :
       {KnapsackInstance{{1}, {1}, 1}, KnapsackInstance{{1, 1}, {1, 1}, 1},
        KnapsackInstance{{1}, {3}, 2}})
    add("knapsack tree", compile(k, {Strategy::Tree}).embedded);
  for (int n = 1; n <= 3; ++n)
    for (const Graph& gr : all_graphs(n))
      for (int q = 1; q <= 3; ++q)
        // Uncolorable instances tie broken and intact chains at the ground.
        add("coloring tiles n=" + std::to_string(n) + " q=" + std::to_string(q),
            compile_coloring({gr, q}).embedded, count_proper_colorings(gr, q) > 0);
  add("coloring complete K2 q=2",
      compile(ColoringInstance{Graph::complete(2), 2}, {Strategy::Complete}).embedded);
  add("coloring complete K3 q=2",
      compile(ColoringInstance{Graph::complete(3), 2}, {Strategy::Complete}).embedded);
  return out;
}

Outcome embedding_soundness() {
  Tally t;
  int instances = 0, chain_checked = 0, largest = 0;
  for (const SoundnessCase& c : soundness_cases()) {
    const EmbeddedQubo& e = c.embedded;
    const Spectrum ps = brute_force(e.physical);
    const Spectrum ls = brute_force(e.logical);
    // Every construction here fixes the offset at zero.
    t.expect(std::abs(ps.ground_energy - ls.ground_energy) < kExact, c.name + " energy");
    if (c.check_chains) {
      ++chain_checked;
      for (const auto& x : ps.ground_states)
        t.expect(unembed(e, x).broken_chains == 0, c.name + " chains");
    }
    const Normalized n = normalize_couplings(to_spin(e.physical));
    t.expect(max_offdiagonal(n.qubo) <= 1.0 + kCoef, c.name + " |J|");
    t.expect(max_field(n.qubo) <= 2.0 + kCoef, c.name + " |h|");
    largest = std::max(largest, e.physical.num_vars());
    ++instances;
  }
  return t.done(std::to_string(instances) + " embedded instances up to " +
                std::to_string(largest) + " physical vars; chain check on " +
                std::to_string(chain_checked) + " (uncolorable coloring instances excluded)");
}

Outcome cartoon_check() {
  Tally t;
  double worst_gap = 0, worst_s = 0;
  for (int N = 1; N <= 20; ++N) {
    const MinGap g = min_gap(N);
    worst_gap = std::max(worst_gap, std::abs(g.gap - std::pow(2.0, -N / 2.0)));
    worst_s = std::max(worst_s, std::abs(g.s - 0.5));
    const double eps = std::ldexp(1.0, -N);
    t.expect(lz_time(N, Schedule::Linear) == 1.0 / eps, "tau linear N=" + std::to_string(N));
    t.expect(lz_time(N, Schedule::Optimal) == 1.0 / std::sqrt(eps),
             "tau optimal N=" + std::to_string(N));
  }
  t.expect(worst_gap <= kExact, "gap 2^{-N/2}");
  t.expect(worst_s <= kExact, "s* = 1/2");
  return t.done("N=1..20 max |gap-2^{-N/2}| " + str(worst_gap) + ", max |s*-1/2| " +
                str(worst_s) + ", tau exact");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lattice counts", lattice_counts},
      {"complete-graph embeddings", complete_embeddings},
      {"unary oracle", unary_oracle},
      {"K22 gadget", k22_gadget_check},
      {"adder", adder_check},
      {"number partitioning", partition_grid},
      {"knapsack", knapsack_dp_check},
      {"coloring gaps", coloring_gaps},
      {"coloring oracle", coloring_oracle},
      {"Hamiltonian cycles", hamcycle_check},
      {"embedding soundness", embedding_soundness},
      {"two-level annealing model", cartoon_check}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
