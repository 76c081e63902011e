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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qlat/qubo.hpp"

namespace qlat {

// A register bit is either a variable or a fixed 0/1.
struct Bit {
  int var = -1;
  int value = 0;

  static Bit constant(int v) { return {-1, v}; }
  static Bit variable(int id) { return {id, 0}; }
  bool is_const() const { return var < 0; }
  bool operator==(const Bit&) const = default;
};

using Register = std::vector<Bit>;

bool all_zero(const Register& r);
Register constant_register(std::uint64_t value, int width = 0);

struct AdderQubo {
  int n = 0;
  Qubo qubo;
  std::map<std::string, int> roles;  // "x1:j", "x2:j", "y:j", "z:j"
};

AdderQubo build_adder(int n);

// (2^n y^n + sum_j 2^j (y^j - x1^j - x2^j))^2 over 3n+1 bits; reference only.
AdderQubo build_naive_adder(int n);

struct SelectableAdder {
  int M = 0;
  Qubo qubo;
  std::map<std::string, int> roles;  // "xa", "xb", "X:j", "Z:j"
};

SelectableAdder build_selectable_adder(std::uint64_t n_a, std::uint64_t n_b, int M);

// Appends sum_j (y^j + 2 z^{j+1} - a^j - b^j - z^j)^2 to q, creating output
// variables. Output has width max(|a|, |b|) + 1; its top bit is the last carry.
// Returns the output register and appends every created id to `created`.
Register add_adder_terms(Qubo& q, const Register& a, const Register& b,
                         const std::string& prefix, std::vector<int>* created);

// Leaf adder: output = n_a * sel_a + n_b * sel_b with M-bit constants.
Register add_selectable_terms(Qubo& q, std::uint64_t n_a, Bit sel_a,
                              std::uint64_t n_b, Bit sel_b, int M,
                              const std::string& prefix,
                              std::vector<int>* created);

struct Clamped {
  Qubo qubo;
  std::vector<int> new_id;  // old id -> new id, -1 if clamped
};

Clamped clamp(const Qubo& q, std::span<const std::pair<int, int>> fixed);

std::uint64_t register_value(const Register& r, std::span<const int> x);

}  // namespace qlat
