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
#include <cstdint>
#include <random>
#include <vector>

#include "qlat/qubo.hpp"

namespace qlat::testing {

// Small deterministic generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // Coefficients are multiples of 1/4 so energies compare exactly.
  Qubo qubo(int n, Domain d = Domain::Binary, double density = 0.5) {
    Qubo q(n, d);
    q.add_offset(uniform_int(-8, 8) / 4.0);
    for (int i = 0; i < n; ++i)
      if (coin(0.8)) q.add_linear(i, uniform_int(-8, 8) / 4.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(density)) q.add_quadratic(i, j, uniform_int(-8, 8) / 4.0);
    return q;
  }

  Assignment assignment(int n, Domain d) {
    Assignment a(n);
    for (auto& v : a) {
      const int b = uniform_int(0, 1);
      v = d == Domain::Binary ? b : 2 * b - 1;
    }
    return a;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng_);
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Reference enumerator: direct evaluation of every assignment.
struct NaiveSpectrum {
  double ground = 0;
  double gap = 0;
  std::vector<Assignment> ground_states;
};

inline Assignment decode_mask(std::uint64_t m, int n, Domain d) {
  Assignment a(n);
  for (int i = 0; i < n; ++i) {
    const int b = static_cast<int>((m >> i) & 1);
    a[i] = d == Domain::Binary ? b : 2 * b - 1;
  }
  return a;
}

inline NaiveSpectrum naive_spectrum(const Qubo& q) {
  const int n = q.num_vars();
  std::vector<double> e(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < e.size(); ++m)
    e[m] = q.evaluate(decode_mask(m, n, q.domain()));
  NaiveSpectrum s;
  s.ground = *std::min_element(e.begin(), e.end());
  double second = 1e300;
  for (std::uint64_t m = 0; m < e.size(); ++m) {
    if (e[m] <= s.ground + 1e-9)
      s.ground_states.push_back(decode_mask(m, n, q.domain()));
    else
      second = std::min(second, e[m]);
  }
  s.gap = second == 1e300 ? 0.0 : second - s.ground;
  return s;
}

}  // namespace qlat::testing
