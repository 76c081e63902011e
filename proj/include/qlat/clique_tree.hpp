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

#include <vector>

#include "qlat/embedding.hpp"

namespace qlat {

// A node of a binary tree whose variables must form a clique together with
// the output variables of its children.
struct CliqueTreeNode {
  std::vector<int> children;  // at most two node indices
  std::vector<int> vars;      // variables owned by this node
  std::vector<int> outputs;   // subset of vars read by the parent
};

struct CliqueTreeLayout {
  MinorEmbedding embedding;
  int width = 0;   // bounding box in cells
  int height = 0;
};

// Recursive layout: each node gets a square clique region in the top-right
// corner of its block; the first child's outputs enter that region along
// rows, the second child's along columns. Children are anti-transposed so
// block sides double every two levels. Every variable of the logical range
// [0, num_logical) must be owned by exactly one node.
CliqueTreeLayout layout_clique_tree(const std::vector<CliqueTreeNode>& nodes,
                                    int root, int J, int num_logical);

}  // namespace qlat
