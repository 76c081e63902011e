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

#include "qlat/clique_tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "qlat/errors.hpp"

namespace qlat {

namespace {

struct Vertex {
  int var, x, y, a;
};

struct Slot {
  int line, k;
};

struct Block {
  int w = 0, h = 0, p = 0;
  std::vector<Vertex> verts;
  std::map<int, Slot> out_row;  // (cell row y, left index k)
  std::map<int, Slot> out_col;  // (cell column x, right index k)
};

class Builder {
 public:
  Builder(const std::vector<CliqueTreeNode>& nodes, int J)
      : nodes_(nodes), J_(J) {}

  Block build(int id, int depth) {
    if (depth > static_cast<int>(nodes_.size()))
      throw InvalidParameter("layout_clique_tree: cycle in tree");
    const CliqueTreeNode& node = nodes_.at(id);
    if (node.children.size() > 2)
      throw InvalidParameter("layout_clique_tree: more than two children");
    std::vector<Block> kids;
    for (int c : node.children) kids.push_back(anti_transpose(build(c, depth + 1)));
    const Block* A = kids.size() > 0 ? &kids[0] : nullptr;
    const Block* B = kids.size() > 1 ? &kids[1] : nullptr;

    const int own = static_cast<int>(node.vars.size());
    const int in_rows = A ? static_cast<int>(A->out_row.size()) : 0;
    const int in_cols = B ? static_cast<int>(B->out_col.size()) : 0;
    int p = std::max({1, ceil_div(own + in_rows, J_), ceil_div(own + in_cols, J_)});
    if (A) p = std::max(p, A->p);
    if (B) p = std::max(p, B->p);

    Block out;
    out.p = p;
    const int xP = std::max(A ? A->w : 0, B ? B->w - p : 0);
    const int yB = std::max(p, A ? A->h : 0);
    out.w = xP + p;
    out.h = B ? yB + B->h : yB;

    std::set<std::pair<int, int>> used_rows, used_cols;
    if (A) {
      const int dx = xP - A->w;
      for (const Vertex& v : A->verts) out.verts.push_back({v.var, v.x + dx, v.y, v.a});
      for (auto [var, s] : A->out_row) {
        used_rows.insert({s.line, s.k});
        for (int x = xP; x < xP + p; ++x) out.verts.push_back({var, x, s.line, s.k});
      }
    }
    if (B) {
      const int dx = xP + p - B->w;
      for (const Vertex& v : B->verts)
        out.verts.push_back({v.var, v.x + dx, v.y + yB, v.a});
      for (auto [var, s] : B->out_col) {
        const int x = s.line + dx;
        used_cols.insert({x, s.k});
        for (int y = 0; y < yB; ++y) out.verts.push_back({var, x, y, J_ + s.k});
      }
    }
    const std::set<int> outputs(node.outputs.begin(), node.outputs.end());
    auto next_free = [&](std::set<std::pair<int, int>>& used, int base) {
      for (int line = base; line < base + p; ++line)
        for (int k = 0; k < J_; ++k)
          if (used.insert({line, k}).second) return Slot{line, k};
      throw InfeasibleEmbedding("layout_clique_tree: region overflow");
    };
    for (int var : node.vars) {
      const Slot r = next_free(used_rows, 0);
      const Slot c = next_free(used_cols, xP);
      for (int x = xP; x < xP + p; ++x) out.verts.push_back({var, x, r.line, r.k});
      for (int y = 0; y < p; ++y) out.verts.push_back({var, c.line, y, J_ + c.k});
      if (outputs.count(var)) {
        out.out_row[var] = r;
        out.out_col[var] = c;
      }
    }
    return out;
  }

  // (x, y) -> (h-1-y, w-1-x) with sides swapped; keeps the region top-right
  // and maps rightward exits to upward ones.
  Block anti_transpose(const Block& b) const {
    Block t;
    t.w = b.h;
    t.h = b.w;
    t.p = b.p;
    for (const Vertex& v : b.verts)
      t.verts.push_back({v.var, b.h - 1 - v.y, b.w - 1 - v.x,
                         v.a < J_ ? v.a + J_ : v.a - J_});
    for (auto [var, s] : b.out_row) t.out_col[var] = {b.h - 1 - s.line, s.k};
    for (auto [var, s] : b.out_col) t.out_row[var] = {b.w - 1 - s.line, s.k};
    return t;
  }

 private:
  static int ceil_div(int a, int b) { return (a + b - 1) / b; }

  const std::vector<CliqueTreeNode>& nodes_;
  int J_;
};

}  // namespace

CliqueTreeLayout layout_clique_tree(const std::vector<CliqueTreeNode>& nodes,
                                    int root, int J, int num_logical) {
  if (J < 1) throw InvalidParameter("layout_clique_tree: J must be >= 1");
  if (root < 0 || root >= static_cast<int>(nodes.size()))
    throw InvalidParameter("layout_clique_tree: bad root");
  Builder b(nodes, J);
  const Block top = b.build(root, 0);
  CliqueTreeLayout out;
  out.width = top.w;
  out.height = top.h;
  const int L = std::max(top.w, top.h);
  out.embedding.lattice = chimera_spec(J, L);
  const LatticeGraph g(out.embedding.lattice);
  std::vector<std::set<int>> chains(num_logical);
  for (const Vertex& v : top.verts) {
    if (v.var < 0 || v.var >= num_logical)
      throw InvalidParameter("layout_clique_tree: variable out of range");
    chains[v.var].insert(g.index(v.x, v.y, v.a));
  }
  for (auto& c : chains) out.embedding.chains.emplace_back(c.begin(), c.end());
  return out;
}

}  // namespace qlat
