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

#include "qlat/cartoon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlat/errors.hpp"

namespace qlat {

namespace {

void require_bits(int N) {
  if (N < 0) throw InvalidParameter("cartoon: N < 0");
}

}  // namespace

double CartoonModel::epsilon() const {
  require_bits(N);
  return std::ldexp(1.0, -N);
}

Matrix2 two_level_hamiltonian(const CartoonModel& m) {
  if (!(m.s >= 0.0 && m.s <= 1.0))
    throw InvalidParameter("two_level_hamiltonian: s outside [0,1]");
  const double e = m.epsilon(), u = 1.0 - m.s;
  const double off = -u * std::sqrt(e * (1.0 - e));
  return {{{-u * e, off}, {off, m.s - u * (1.0 - e)}}};
}

std::array<double, 2> eigenvalues(const Matrix2& h) {
  const double mean = 0.5 * (h[0][0] + h[1][1]);
  const double half = 0.5 * std::hypot(h[0][0] - h[1][1], 2.0 * h[0][1]);
  return {mean - half, mean + half};
}

double spectral_gap(const CartoonModel& m) {
  const auto h = two_level_hamiltonian(m);
  return std::hypot(h[0][0] - h[1][1], 2.0 * h[0][1]);
}

MinGap min_gap(int N) {
  require_bits(N);
  // Entries are affine in s, so gap^2 is a parabola through three samples.
  const auto sq = [N](double s) {
    const Matrix2 h = two_level_hamiltonian({N, s});
    const double d = h[0][0] - h[1][1];
    return d * d + 4.0 * h[0][1] * h[0][1];
  };
  const double q0 = sq(0.0), qh = sq(0.5), q1 = sq(1.0);
  const double A = 2.0 * (q0 - 2.0 * qh + q1);
  const double B = q1 - q0 - A;
  double s = 0.5;
  if (A > 0.0) {
    s = std::clamp(-B / (2.0 * A), 0.0, 1.0);
  } else if (std::min(q0, q1) < qh) {
    s = q0 <= q1 ? 0.0 : 1.0;
  }
  return {spectral_gap({N, s}), s};
}

double lz_time(int N, Schedule schedule) {
  const double e = CartoonModel{N, 0.0}.epsilon();
  return schedule == Schedule::Linear ? 1.0 / e : 1.0 / std::sqrt(e);
}

}  // namespace qlat
