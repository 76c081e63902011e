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

#include <array>

namespace qlat {

// Two-level reduction of annealing a single marked state with a projector
// drive. Basis order: |down>, |up>.
struct CartoonModel {
  int N = 1;
  double s = 0.0;
  double epsilon() const;  // 2^-N
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

Matrix2 two_level_hamiltonian(const CartoonModel& m);

// Ascending.
std::array<double, 2> eigenvalues(const Matrix2& h);
double spectral_gap(const CartoonModel& m);

struct MinGap {
  double gap = 0.0;
  double s = 0.0;
};

// Golden-section minimisation of the gap over s in [0, 1].
MinGap min_gap(int N);

enum class Schedule { Linear, Optimal };

// Landau-Zener scaling estimates: 1/eps (linear) and 1/sqrt(eps) (optimal).
double lz_time(int N, Schedule schedule);

}  // namespace qlat
