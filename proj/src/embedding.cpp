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

#include "qlat/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace qlat {

Graph Graph::complete(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

bool Graph::has_edge(int u, int v) const {
  return std::find_if(edges.begin(), edges.end(), [&](const Edge& e) {
           return (e.first == u && e.second == v) ||
                  (e.first == v && e.second == u);
         }) != edges.end();
}

Graph interaction_graph(const Qubo& q) {
  Graph g{q.num_vars(), {}};
  for (auto [ij, c] : q.quadratic())
    if (c != 0.0) g.edges.push_back(ij);
  return g;
}

int MinorEmbedding::num_physical() const {
  int n = 0;
  for (const auto& c : chains) n += static_cast<int>(c.size());
  return n;
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    switch (v.kind) {
      case ViolationKind::EmptyChain:
        os << "empty chain " << v.u;
        break;
      case ViolationKind::OutOfRange:
        os << "chain " << v.u << " vertex " << v.witness << " out of range";
        break;
      case ViolationKind::Disconnected:
        os << "chain " << v.u << " disconnected at " << v.witness;
        break;
      case ViolationKind::Overlap:
        os << "chains " << v.u << " and " << v.v << " share " << v.witness;
        break;
      case ViolationKind::MissingEdge:
        os << "no lattice edge for logical edge " << v.u << "-" << v.v;
        break;
    }
    os << '\n';
  }
  return os.str();
}

namespace {

// BFS spanning tree of the chain's induced subgraph; empty if disconnected.
std::optional<std::vector<Edge>> chain_tree(const LatticeGraph& g,
                                            const std::vector<int>& chain,
                                            int* unreached = nullptr) {
  std::vector<int> sorted = chain;
  std::sort(sorted.begin(), sorted.end());
  auto member = [&](int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  };
  std::set<int> seen{sorted.front()};
  std::queue<int> frontier;
  frontier.push(sorted.front());
  std::vector<Edge> tree;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : g.neighbors(v)) {
      if (!member(u) || seen.count(u)) continue;
      seen.insert(u);
      tree.emplace_back(std::min(u, v), std::max(u, v));
      frontier.push(u);
    }
  }
  if (seen.size() != sorted.size()) {
    if (unreached)
      for (int v : sorted)
        if (!seen.count(v)) {
          *unreached = v;
          break;
        }
    return std::nullopt;
  }
  return tree;
}

std::optional<Edge> smallest_link(const LatticeGraph& g,
                                  const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> sorted = b;
  std::sort(sorted.begin(), sorted.end());
  std::optional<Edge> best;
  for (int x : a)
    for (int y : g.neighbors(x))
      if (std::binary_search(sorted.begin(), sorted.end(), y)) {
        const Edge e{std::min(x, y), std::max(x, y)};
        if (!best || e < *best) best = e;
      }
  return best;
}

}  // namespace

ValidationReport validate(const MinorEmbedding& e, const Graph& logical) {
  ValidationReport r;
  const LatticeGraph g(e.lattice);
  std::vector<int> owner(g.num_vertices(), -1);
  std::vector<bool> usable(e.chains.size(), true);
  for (int u = 0; u < e.num_logical(); ++u) {
    const auto& chain = e.chains[u];
    if (chain.empty()) {
      r.violations.push_back({ViolationKind::EmptyChain, u});
      usable[u] = false;
      continue;
    }
    for (int p : chain) {
      if (p < 0 || p >= g.num_vertices()) {
        r.violations.push_back({ViolationKind::OutOfRange, u, -1, p});
        usable[u] = false;
        continue;
      }
      if (owner[p] >= 0)
        r.violations.push_back({ViolationKind::Overlap, owner[p], u, p});
      else
        owner[p] = u;
    }
    if (!usable[u]) continue;
    int witness = -1;
    if (!chain_tree(g, chain, &witness))
      r.violations.push_back({ViolationKind::Disconnected, u, -1, witness});
  }
  for (auto [u, v] : logical.edges) {
    if (u >= e.num_logical() || v >= e.num_logical() || !usable[u] ||
        !usable[v] || !smallest_link(g, e.chains[u], e.chains[v]))
      r.violations.push_back({ViolationKind::MissingEdge, u, v});
  }
  return r;
}

MinorEmbedding embed_complete_generic(int N, const LatticeSpec& spec,
                                      int u_role, int v_role) {
  const auto& c = spec.cell;
  const auto in_cell = [&](int a) { return a >= 0 && a < c.n; };
  if (!in_cell(u_role) || !in_cell(v_role) || !c.A[u_role][v_role] ||
      !c.A_h[u_role][u_role] || !c.A_v[v_role][v_role])
    throw UnsupportedCell("embed_complete_generic: cell lacks u/v roles");
  if (N < 1 || N > spec.rows || N > spec.cols)
    throw InvalidParameter("embed_complete_generic: lattice too small");
  const LatticeGraph g(spec);
  MinorEmbedding e{spec, std::vector<std::vector<int>>(N), {}, 1.0};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      e.chains[i].push_back(g.index(j, i, u_role));
      e.chains[i].push_back(g.index(i, j, v_role));
    }
  for (auto& ch : e.chains) std::sort(ch.begin(), ch.end());
  return e;
}

MinorEmbedding embed_complete_chimera(int N, int J) {
  if (J < 1) throw InvalidParameter("embed_complete_chimera: J must be >= 1");
  if (N < 1) throw InvalidParameter("embed_complete_chimera: N must be >= 1");
  const int L = (N + J - 1) / J;
  const LatticeSpec spec = chimera_spec(J, L);
  const LatticeGraph g(spec);
  MinorEmbedding e{spec, std::vector<std::vector<int>>(N), {}, 1.0};
  for (int v = 0; v < N; ++v) {
    const int block = v / J, k = v % J;
    for (int t = 0; t < L; ++t) {
      e.chains[v].push_back(g.index(t, block, k));
      e.chains[v].push_back(g.index(block, t, J + k));
    }
    std::sort(e.chains[v].begin(), e.chains[v].end());
  }
  return e;
}

int EmbeddedQubo::slot(int lattice_vertex) const {
  auto it = std::find(vertex_of.begin(), vertex_of.end(), lattice_vertex);
  return it == vertex_of.end() ? -1 : static_cast<int>(it - vertex_of.begin());
}

double choose_alpha(const Qubo& logical) {
  std::vector<double> load(logical.num_vars(), 0.0);
  for (auto [i, c] : logical.linear()) load[i] += std::abs(c);
  for (auto [ij, c] : logical.quadratic()) {
    load[ij.first] += std::abs(c);
    load[ij.second] += std::abs(c);
  }
  double m = 0.0;
  for (double l : load) m = std::max(m, l);
  return 1.0 + m;
}

EmbeddedQubo embed_qubo(const Qubo& logical, const MinorEmbedding& e,
                        double alpha) {
  if (e.num_logical() != logical.num_vars())
    throw InvalidParameter("embed_qubo: chain count != logical variables");
  const Graph lg = interaction_graph(logical);
  const auto report = validate(e, lg);
  if (!report.ok()) throw InfeasibleEmbedding(report.describe());
  const Qubo bin = to_binary(logical);
  if (alpha <= 0.0) alpha = choose_alpha(bin);

  const LatticeGraph g(e.lattice);
  EmbeddedQubo out;
  out.embedding = e;
  out.embedding.alpha = alpha;
  out.logical = logical;
  std::vector<int> slot_of(g.num_vertices(), -1);
  for (int u = 0; u < e.num_logical(); ++u)
    for (int p : e.chains[u]) {
      slot_of[p] = static_cast<int>(out.vertex_of.size());
      out.vertex_of.push_back(p);
      out.chain_of.push_back(u);
    }
  Qubo phys(static_cast<int>(out.vertex_of.size()));
  phys.add_offset(bin.offset());
  for (auto [u, c] : bin.linear()) {
    const auto& chain = e.chains[u];
    for (int p : chain)
      phys.add_linear(slot_of[p], c / static_cast<double>(chain.size()));
  }
  for (auto [uv, c] : bin.quadratic()) {
    if (c == 0.0) continue;
    const auto link = smallest_link(g, e.chains[uv.first], e.chains[uv.second]);
    phys.add_quadratic(slot_of[link->first], slot_of[link->second], c);
    out.placements.push_back({uv, *link});
  }
  for (const auto& chain : e.chains) {
    const auto tree = chain_tree(g, chain);
    for (auto [a, b] : *tree) {
      // Both orderings of the pair: 2 alpha per broken tree edge.
      phys.add_linear(slot_of[a], 2.0 * alpha);
      phys.add_linear(slot_of[b], 2.0 * alpha);
      phys.add_quadratic(slot_of[a], slot_of[b], -4.0 * alpha);
    }
  }
  if (!e.names.empty()) {
    std::vector<std::string> names;
    for (std::size_t s = 0; s < out.vertex_of.size(); ++s)
      names.push_back(e.names[out.chain_of[s]] + "@" +
                      std::to_string(out.vertex_of[s]));
    phys.set_names(std::move(names));
  }
  out.physical = logical.domain() == Domain::Spin ? to_spin(phys) : phys;
  return out;
}

Unembedded unembed(const EmbeddedQubo& e, std::span<const int> physical) {
  if (physical.size() != e.vertex_of.size())
    throw InvalidAssignment("unembed: assignment length mismatch");
  const bool spin = e.logical.domain() == Domain::Spin;
  const int n = e.embedding.num_logical();
  std::vector<int> ones(n, 0), size(n, 0);
  for (std::size_t s = 0; s < physical.size(); ++s) {
    const int u = e.chain_of[s];
    ++size[u];
    if (physical[s] == 1) ++ones[u];
  }
  Unembedded r;
  r.logical.resize(n);
  for (int u = 0; u < n; ++u) {
    const bool one = 2 * ones[u] > size[u];
    r.logical[u] = one ? 1 : (spin ? -1 : 0);
    if (ones[u] != 0 && ones[u] != size[u]) ++r.broken_chains;
  }
  return r;
}

Assignment lift_logical(const EmbeddedQubo& e, std::span<const int> logical) {
  Assignment a(e.vertex_of.size());
  for (std::size_t s = 0; s < a.size(); ++s) a[s] = logical[e.chain_of[s]];
  return a;
}

}  // namespace qlat
