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

#include "qlat/numpart.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace qlat {

namespace {

int bit_length(std::uint64_t v) { return static_cast<int>(std::bit_width(v)); }

std::uint64_t max_of(const std::vector<std::uint64_t>& v) {
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

struct Item {
  std::vector<std::uint64_t> amounts;  // per quantity
  Bit selector;
};

struct Entry {
  int node = -1;
  std::vector<Register> regs;
};

std::uint64_t constant_value(const Register& r) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (r[j].value) v |= std::uint64_t{1} << j;
  return v;
}

// Pairwise summation over 2^levels padded leaves. Constant subtrees are
// folded; an all-zero sibling passes the other register through.
SummationTreeQubo build_tree(Qubo base, const std::vector<Item>& items,
                             const std::vector<int>& widths,
                             const std::vector<std::string>& tags) {
  SummationTreeQubo t;
  t.qubo = std::move(base);
  const int Q = static_cast<int>(widths.size());
  for (const Item& it : items) {
    t.selectors.push_back(it.selector.var);
    t.selector_values.push_back(it.selector.value);
  }
  int levels = 1;
  while ((std::size_t{1} << levels) < items.size()) ++levels;
  t.levels = levels;

  std::vector<Entry> layer;
  const std::size_t leaves = std::size_t{1} << (levels - 1);
  for (std::size_t k = 0; k < leaves; ++k) {
    const Item absent{std::vector<std::uint64_t>(Q, 0), Bit::constant(0)};
    const Item& a = 2 * k < items.size() ? items[2 * k] : absent;
    const Item& b = 2 * k + 1 < items.size() ? items[2 * k + 1] : absent;
    Entry e;
    if (a.selector.is_const() && b.selector.is_const()) {
      for (int q = 0; q < Q; ++q)
        e.regs.push_back(constant_register(
            a.amounts[q] * a.selector.value + b.amounts[q] * b.selector.value,
            widths[q] + 1));
    } else {
      SumNode node;
      node.level = levels - 1;
      for (const Item* it : {&a, &b})
        if (!it->selector.is_const()) node.vars.push_back(it->selector.var);
      for (int q = 0; q < Q; ++q) {
        const std::string prefix =
            tags[q] + std::to_string(levels - 1) + "_" + std::to_string(k) + ".";
        node.registers.push_back(add_selectable_terms(
            t.qubo, a.amounts[q], a.selector, b.amounts[q], b.selector,
            widths[q], prefix, &node.vars));
      }
      e.regs = node.registers;
      e.node = static_cast<int>(t.nodes.size());
      t.nodes.push_back(std::move(node));
    }
    layer.push_back(std::move(e));
  }

  for (int level = levels - 2; level >= 0; --level) {
    std::vector<Entry> next;
    for (std::size_t k = 0; 2 * k < layer.size(); ++k) {
      const Entry& a = layer[2 * k];
      const Entry& b = layer[2 * k + 1];
      auto zero = [](const Entry& e) {
        return e.node < 0 &&
               std::all_of(e.regs.begin(), e.regs.end(), all_zero);
      };
      if (zero(b)) {
        next.push_back(a);
        continue;
      }
      if (zero(a)) {
        next.push_back(b);
        continue;
      }
      Entry e;
      if (a.node < 0 && b.node < 0) {
        for (int q = 0; q < Q; ++q) {
          const std::size_t w = std::max(a.regs[q].size(), b.regs[q].size()) + 1;
          e.regs.push_back(constant_register(
              constant_value(a.regs[q]) + constant_value(b.regs[q]),
              static_cast<int>(w)));
        }
      } else {
        SumNode node;
        node.level = level;
        for (const Entry* c : {&a, &b})
          if (c->node >= 0) node.children.push_back(c->node);
        for (int q = 0; q < Q; ++q) {
          const std::string prefix =
              tags[q] + std::to_string(level) + "_" + std::to_string(k) + ".";
          node.registers.push_back(
              add_adder_terms(t.qubo, a.regs[q], b.regs[q], prefix, &node.vars));
        }
        e.regs = node.registers;
        e.node = static_cast<int>(t.nodes.size());
        t.nodes.push_back(std::move(node));
      }
      next.push_back(std::move(e));
    }
    layer = std::move(next);
  }
  t.root = layer.front().node;
  t.root_registers = layer.front().regs;
  return t;
}

// Fixes root register bits; constant bits that disagree add a unit penalty.
void apply_root_bits(SummationTreeQubo& t,
                     const std::vector<std::pair<Bit, int>>& required) {
  std::vector<std::pair<int, int>> fixed;
  for (auto [bit, value] : required) {
    if (bit.is_const()) {
      if (bit.value != value) {
        t.infeasible = true;
        t.qubo.add_offset(1.0);
      }
    } else {
      fixed.emplace_back(bit.var, value);
    }
  }
  if (fixed.empty()) return;
  std::vector<int> value_of(t.qubo.num_vars(), 0);
  for (auto [v, val] : fixed) value_of[v] = val;
  Clamped c = clamp(t.qubo, fixed);
  auto remap_bit = [&](Bit& b) {
    if (b.is_const()) return;
    const int id = c.new_id[b.var];
    b = id >= 0 ? Bit::variable(id) : Bit::constant(value_of[b.var]);
  };
  for (auto& s : t.selectors)
    if (s >= 0) s = c.new_id[s];
  for (SumNode& n : t.nodes) {
    std::vector<int> vars;
    for (int v : n.vars)
      if (c.new_id[v] >= 0) vars.push_back(c.new_id[v]);
    n.vars = std::move(vars);
    for (auto& r : n.registers)
      for (Bit& b : r) remap_bit(b);
  }
  for (auto& r : t.root_registers)
    for (Bit& b : r) remap_bit(b);
  t.qubo = std::move(c.qubo);
}

SummationTreeQubo infeasible_marker(int n) {
  SummationTreeQubo t;
  for (int i = 0; i < n; ++i) {
    t.selectors.push_back(t.qubo.add_var("x" + std::to_string(i)));
    t.selector_values.push_back(0);
  }
  t.qubo.add_offset(1.0);
  t.infeasible = true;
  return t;
}

}  // namespace

int PartitionInstance::M() const { return std::max(1, bit_length(max_of(numbers))); }

std::uint64_t PartitionInstance::total() const {
  return std::accumulate(numbers.begin(), numbers.end(), std::uint64_t{0});
}

int KnapsackInstance::value_bits() const { return bit_length(max_of(values)); }
int KnapsackInstance::weight_bits() const { return bit_length(max_of(weights)); }
int KnapsackInstance::capacity_bits() const { return bit_length(capacity); }

void KnapsackInstance::check() const {
  if (values.size() != weights.size())
    throw InvalidParameter("knapsack: values and weights differ in length");
  if (values.empty()) throw InvalidParameter("knapsack: no items");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == 0 || weights[i] == 0)
      throw InvalidParameter("knapsack: values and weights must be positive");
  if (capacity_bits() > 40) throw InvalidParameter("knapsack: capacity too large");
}

SummationTreeQubo build_numpart_qubo(const PartitionInstance& inst) {
  if (inst.N() < 2) throw InvalidParameter("numpart: need at least two numbers");
  for (auto n : inst.numbers)
    if (n == 0) throw InvalidParameter("numpart: numbers must be positive");
  if (!inst.even()) return infeasible_marker(inst.N());
  std::vector<Item> items;
  Qubo base;
  for (int i = 0; i < inst.N(); ++i)
    items.push_back(
        {{inst.numbers[i]}, Bit::variable(base.add_var("x" + std::to_string(i)))});
  SummationTreeQubo t = build_tree(std::move(base), items, {inst.M()}, {"X"});
  const Register& X = t.root_registers.front();
  const std::uint64_t W = inst.W();
  const int width = std::max(static_cast<int>(X.size()), bit_length(W));
  for (int p = 0; p < width; ++p) {
    const Bit x = p < static_cast<int>(X.size()) ? X[p] : Bit::constant(0);
    std::vector<std::pair<int, double>> terms;
    double constant = static_cast<double>((W >> p) & 1);
    if (x.is_const())
      constant -= x.value;
    else
      terms.emplace_back(x.var, -1.0);
    t.qubo.add_square(1.0, constant, terms);
  }
  return t;
}

namespace {

struct KnapsackTree {
  SummationTreeQubo tree;
  int m = 0;
  std::size_t real_items = 0;
};

KnapsackTree knapsack_tree(const KnapsackInstance& inst) {
  inst.check();
  KnapsackTree k;
  k.m = inst.capacity_bits();
  const std::uint64_t dummy = ((std::uint64_t{1} << k.m) - 1) - inst.capacity;
  Qubo base;
  std::vector<Item> items;
  for (int i = 0; i < inst.N(); ++i)
    items.push_back({{inst.values[i], inst.weights[i]},
                     Bit::variable(base.add_var("x" + std::to_string(i)))});
  if (dummy > 0) items.push_back({{0, dummy}, Bit::constant(1)});
  const std::vector<int> widths = {
      std::max(1, inst.value_bits()),
      std::max({1, inst.weight_bits(), bit_length(dummy)})};
  k.tree = build_tree(std::move(base), items, widths, {"V", "W"});
  k.tree.selectors.resize(inst.N());
  k.tree.selector_values.resize(inst.N());
  return k;
}

}  // namespace

int knapsack_value_width(const KnapsackInstance& inst) {
  return static_cast<int>(knapsack_tree(inst).tree.root_registers[0].size());
}

SummationTreeQubo build_knapsack_qubo(
    const KnapsackInstance& inst, int target_exponent,
    const std::vector<std::pair<int, int>>& value_prefix) {
  KnapsackTree k = knapsack_tree(inst);
  SummationTreeQubo& t = k.tree;
  const Register& V = t.root_registers[0];
  const Register& W = t.root_registers[1];
  const int vw = static_cast<int>(V.size());
  if (target_exponent < 0 || target_exponent >= vw)
    throw InvalidParameter("knapsack: target exponent outside value register");
  std::vector<std::pair<Bit, int>> required;
  for (int p = target_exponent; p < vw; ++p)
    required.emplace_back(V[p], p == target_exponent ? 1 : 0);
  for (auto [p, val] : value_prefix) {
    if (p < 0 || p >= target_exponent)
      throw InvalidParameter("knapsack: value prefix bit outside window");
    required.emplace_back(V[p], val);
  }
  for (int p = k.m; p < static_cast<int>(W.size()); ++p)
    required.emplace_back(W[p], 0);
  apply_root_bits(t, required);
  return t;
}

SumEmbedding embed_summation_tree(SummationTreeQubo tree, int J) {
  if (J < 2) throw InvalidParameter("embed: J must be >= 2");
  SumEmbedding out;
  const int n = tree.qubo.num_vars();
  if (tree.root < 0) {
    // No adders: every variable is an isolated selector.
    int L = 1;
    while (2 * J * L * L < n) ++L;
    out.layout.embedding.lattice = chimera_spec(J, L);
    out.layout.width = out.layout.height = L;
    for (int v = 0; v < n; ++v) out.layout.embedding.chains.push_back({v});
  } else {
    std::vector<CliqueTreeNode> nodes;
    for (const SumNode& s : tree.nodes) {
      CliqueTreeNode c;
      c.children = s.children;
      c.vars = s.vars;
      for (const Register& r : s.registers)
        for (const Bit& b : r)
          if (!b.is_const()) c.outputs.push_back(b.var);
      nodes.push_back(std::move(c));
    }
    out.layout = layout_clique_tree(nodes, tree.root, J, n);
  }
  out.layout.embedding.names = tree.qubo.var_names();
  out.layout.embedding.names.resize(n);
  const ValidationReport rep =
      validate(out.layout.embedding, interaction_graph(tree.qubo));
  if (!rep.ok()) throw InfeasibleEmbedding("summation tree: " + rep.describe());
  out.embedded = embed_qubo(tree.qubo, out.layout.embedding);
  out.tree = std::move(tree);
  return out;
}

SumEmbedding embed_numpart(const PartitionInstance& inst, int J) {
  return embed_summation_tree(build_numpart_qubo(inst), J);
}

SumEmbedding embed_knapsack(const KnapsackInstance& inst, int target_exponent,
                            int J) {
  return embed_summation_tree(build_knapsack_qubo(inst, target_exponent), J);
}

double predicted_numpart_length(double N, double M, int J, NumpartStrategy s) {
  if (s == NumpartStrategy::Linear) return 7.0 * N * M / J;
  return (12.0 * M + 40.0) / J * std::sqrt(N);
}

double predicted_knapsack_length(double N, double value_bits,
                                 double weight_bits, int J) {
  return std::sqrt(N) / J * (50.0 + 8.0 * value_bits + 8.0 * weight_bits);
}

namespace {

int selector_value(const SummationTreeQubo& t, std::size_t i,
                   std::span<const int> x) {
  if (t.selectors[i] < 0) return t.selector_values[i];
  const int v = x[t.selectors[i]];
  return t.qubo.domain() == Domain::Spin ? (v + 1) / 2 : v;
}

}  // namespace

PartitionDecoding decode_partition(const PartitionInstance& inst,
                                   const SummationTreeQubo& tree,
                                   std::span<const int> logical) {
  if (static_cast<int>(logical.size()) != tree.qubo.num_vars())
    throw InvalidAssignment("decode_partition: assignment length mismatch");
  PartitionDecoding d;
  for (int i = 0; i < inst.N(); ++i) {
    if (selector_value(tree, i, logical)) {
      d.set_a.push_back(i);
      d.sum_a += inst.numbers[i];
    } else {
      d.set_b.push_back(i);
      d.sum_b += inst.numbers[i];
    }
  }
  d.residual = d.sum_a > d.sum_b ? d.sum_a - d.sum_b : d.sum_b - d.sum_a;
  d.balanced = d.residual == 0;
  return d;
}

KnapsackDecoding evaluate_subset(const KnapsackInstance& inst,
                                 std::vector<int> items) {
  KnapsackDecoding d;
  std::sort(items.begin(), items.end());
  for (int i : items) {
    d.value += inst.values.at(i);
    d.weight += inst.weights.at(i);
  }
  d.items = std::move(items);
  d.within_capacity = d.weight <= inst.capacity;
  return d;
}

KnapsackDecoding decode_knapsack(const KnapsackInstance& inst,
                                 const SummationTreeQubo& tree,
                                 std::span<const int> logical) {
  if (static_cast<int>(logical.size()) != tree.qubo.num_vars())
    throw InvalidAssignment("decode_knapsack: assignment length mismatch");
  std::vector<int> items;
  for (int i = 0; i < inst.N(); ++i)
    if (selector_value(tree, i, logical)) items.push_back(i);
  return evaluate_subset(inst, std::move(items));
}

SweepResult knapsack_sweep(const KnapsackInstance& inst,
                           const QuboSolver& solver) {
  return knapsack_sweep_trees(
      inst, [&](const SummationTreeQubo& t) { return solver(t.qubo); });
}

SweepResult knapsack_sweep_trees(const KnapsackInstance& inst,
                                 const TreeSolver& solver) {
  SweepResult r;
  r.best = evaluate_subset(inst, {});
  const int width = knapsack_value_width(inst);
  auto feasible = [&](const SummationTreeQubo& t, KnapsackDecoding* out) {
    if (t.infeasible) return false;
    const AnnealResult a = solver(t);
    ++r.solves;
    if (a.energy > 0.5) return false;
    KnapsackDecoding d = decode_knapsack(inst, t, a.assignment);
    if (!d.within_capacity) return false;
    *out = std::move(d);
    return true;
  };
  for (int l = width - 1; l >= 0; --l) {
    KnapsackDecoding d;
    if (!feasible(build_knapsack_qubo(inst, l), &d)) continue;
    r.window_exponent = l;
    r.best = std::move(d);
    std::vector<std::pair<int, int>> prefix;
    for (int p = l - 1; p >= 0; --p) {
      prefix.emplace_back(p, 1);
      KnapsackDecoding better;
      if (feasible(build_knapsack_qubo(inst, l, prefix), &better))
        r.best = std::move(better);
      else
        prefix.back().second = 0;
    }
    break;
  }
  return r;
}

Qubo build_knapsack_reference(const KnapsackInstance& inst, double A) {
  inst.check();
  Qubo q;
  std::vector<std::pair<int, double>> terms;
  for (int i = 0; i < inst.N(); ++i) {
    const int x = q.add_var("x" + std::to_string(i));
    terms.emplace_back(x, -static_cast<double>(inst.weights[i]));
    q.add_linear(x, -static_cast<double>(inst.values[i]));
  }
  // Slack covers exactly 0..W_max with power-of-two digits and one remainder.
  const int m = inst.capacity == 0 ? 0 : bit_length(inst.capacity) - 1;
  for (int j = 0; j < m; ++j)
    terms.emplace_back(q.add_var("y" + std::to_string(j)),
                       static_cast<double>(std::uint64_t{1} << j));
  terms.emplace_back(
      q.add_var("y" + std::to_string(m)),
      static_cast<double>(inst.capacity + 1) - static_cast<double>(std::uint64_t{1} << m));
  q.add_square(A, 0.0, terms);
  return q;
}

}  // namespace qlat
