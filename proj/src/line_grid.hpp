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

#include <algorithm>
#include <string>
#include <vector>

#include "qlat/embedding.hpp"
#include "qlat/errors.hpp"
#include "qlat/lattice.hpp"

namespace qlat::detail {

enum class Axis { Row, Col };

// Tiles of `lines` horizontal and `lines` vertical lines. A row line runs
// along the left spins of one cell row of a tile, a column line along the
// right spins of one cell column; every row line meets every column line of
// the same tile, and lines with equal index continue into the neighbouring
// tile along their axis.
class LineGrid {
 public:
  LineGrid(int tiles_x, int tiles_y, int lines)
      : tx_(tiles_x), ty_(tiles_y), lines_(lines),
        owner_(2 * static_cast<std::size_t>(tiles_x) * tiles_y * lines, -1) {}

  int tiles_x() const { return tx_; }
  int tiles_y() const { return ty_; }
  int lines() const { return lines_; }

  void claim(int X, int Y, Axis a, int k, int var) {
    int& o = owner_[slot(X, Y, a, k)];
    if (o != -1 && o != var)
      throw InfeasibleEmbedding("line grid: tile (" + std::to_string(X) + "," +
                                std::to_string(Y) + ") " +
                                (a == Axis::Row ? "row " : "column ") +
                                std::to_string(k) + " owned by " +
                                std::to_string(o) + ", wanted by " +
                                std::to_string(var));
    o = var;
  }
  void cross(int X, int Y, int k, int var) {
    claim(X, Y, Axis::Row, k, var);
    claim(X, Y, Axis::Col, k, var);
  }
  int owner(int X, int Y, Axis a, int k) const {
    return owner_[slot(X, Y, a, k)];
  }

  int tile_cells(int J) const { return (lines_ + J - 1) / J; }
  int side(int J) const { return std::max(tx_, ty_) * tile_cells(J); }

  MinorEmbedding realize(int J, int num_vars) const {
    const int T = tile_cells(J);
    const int L = side(J);
    const LatticeGraph g(chimera_spec(J, L));
    MinorEmbedding e;
    e.lattice = g.spec();
    e.chains.assign(num_vars, {});
    for (int X = 0; X < tx_; ++X)
      for (int Y = 0; Y < ty_; ++Y)
        for (int k = 0; k < lines_; ++k) {
          if (int v = owner(X, Y, Axis::Row, k); v >= 0)
            for (int c = 0; c < T; ++c)
              e.chains[v].push_back(g.index(X * T + c, Y * T + k / J, k % J));
          if (int v = owner(X, Y, Axis::Col, k); v >= 0)
            for (int c = 0; c < T; ++c)
              e.chains[v].push_back(
                  g.index(X * T + k / J, Y * T + c, J + k % J));
        }
    for (auto& c : e.chains) std::sort(c.begin(), c.end());
    return e;
  }

 private:
  std::size_t slot(int X, int Y, Axis a, int k) const {
    if (X < 0 || Y < 0 || X >= tx_ || Y >= ty_ || k < 0 || k >= lines_)
      throw InvalidParameter("line grid: claim outside the grid");
    return ((static_cast<std::size_t>(Y) * tx_ + X) * 2 +
            (a == Axis::Row ? 0 : 1)) * lines_ + k;
  }

  int tx_, ty_, lines_;
  std::vector<int> owner_;
};

}  // namespace qlat::detail
