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

#include "qlat/adder.hpp"

#include <algorithm>

namespace qlat {

bool all_zero(const Register& r) {
  return std::all_of(r.begin(), r.end(),
                     [](const Bit& b) { return b.is_const() && b.value == 0; });
}

Register constant_register(std::uint64_t value, int width) {
  Register r;
  for (int j = 0; value >> j || j < width; ++j)
    r.push_back(Bit::constant(static_cast<int>((value >> j) & 1)));
  return r;
}

namespace {

// Square of (constant + sum c_k v_k) with constant-valued bits folded.
struct Linear {
  double constant = 0;
  std::vector<std::pair<int, double>> terms;

  void add(Bit b, double c) {
    if (b.is_const())
      constant += c * b.value;
    else
      terms.emplace_back(b.var, c);
  }
  void commit(Qubo& q) const { q.add_square(1.0, constant, terms); }
};

Bit at(const Register& r, std::size_t j) {
  return j < r.size() ? r[j] : Bit::constant(0);
}

}  // namespace

Register add_adder_terms(Qubo& q, const Register& a, const Register& b,
                         const std::string& prefix, std::vector<int>* created) {
  const std::size_t w = std::max(a.size(), b.size());
  Register out;
  Bit carry = Bit::constant(0);
  for (std::size_t j = 0; j < w; ++j) {
    const Bit y = Bit::variable(q.add_var(prefix + "y" + std::to_string(j)));
    const Bit z = Bit::variable(q.add_var(prefix + "z" + std::to_string(j + 1)));
    if (created) created->insert(created->end(), {y.var, z.var});
    Linear t;
    t.add(y, 1);
    t.add(z, 2);
    t.add(at(a, j), -1);
    t.add(at(b, j), -1);
    t.add(carry, -1);
    t.commit(q);
    out.push_back(y);
    carry = z;
  }
  out.push_back(carry);
  return out;
}

Register add_selectable_terms(Qubo& q, std::uint64_t n_a, Bit sel_a,
                              std::uint64_t n_b, Bit sel_b, int M,
                              const std::string& prefix,
                              std::vector<int>* created) {
  if (M < 1 || (n_a >> M) || (n_b >> M))
    throw InvalidParameter("selectable adder: constants exceed M bits");
  Register out;
  Bit carry = Bit::constant(0);
  for (int j = 0; j < M; ++j) {
    const Bit x = Bit::variable(q.add_var(prefix + "X" + std::to_string(j)));
    const Bit z = Bit::variable(q.add_var(prefix + "Z" + std::to_string(j + 1)));
    if (created) created->insert(created->end(), {x.var, z.var});
    Linear t;
    t.add(x, 1);
    t.add(z, 2);
    t.add(carry, -1);
    t.add(sel_a, -static_cast<double>((n_a >> j) & 1));
    t.add(sel_b, -static_cast<double>((n_b >> j) & 1));
    t.commit(q);
    out.push_back(x);
    carry = z;
  }
  out.push_back(carry);
  return out;
}

AdderQubo build_adder(int n) {
  if (n < 1) throw InvalidParameter("build_adder: n must be >= 1");
  AdderQubo r;
  r.n = n;
  Register a, b;
  for (int j = 0; j < n; ++j) {
    a.push_back(Bit::variable(r.qubo.add_var("x1_" + std::to_string(j))));
    r.roles["x1:" + std::to_string(j)] = a.back().var;
  }
  for (int j = 0; j < n; ++j) {
    b.push_back(Bit::variable(r.qubo.add_var("x2_" + std::to_string(j))));
    r.roles["x2:" + std::to_string(j)] = b.back().var;
  }
  const Register y = add_adder_terms(r.qubo, a, b, "", nullptr);
  for (int j = 0; j <= n; ++j) r.roles["y:" + std::to_string(j)] = y[j].var;
  for (int j = 1; j <= n; ++j)
    r.roles["z:" + std::to_string(j)] = r.qubo.num_vars() - 2 * n + 2 * j - 1;
  return r;
}

AdderQubo build_naive_adder(int n) {
  if (n < 1) throw InvalidParameter("build_naive_adder: n must be >= 1");
  AdderQubo r;
  r.n = n;
  std::vector<std::pair<int, double>> terms;
  for (const char* who : {"x1", "x2"})
    for (int j = 0; j < n; ++j) {
      const int id = r.qubo.add_var(std::string(who) + "_" + std::to_string(j));
      r.roles[std::string(who) + ":" + std::to_string(j)] = id;
      terms.emplace_back(id, -static_cast<double>(std::uint64_t{1} << j));
    }
  for (int j = 0; j <= n; ++j) {
    const int id = r.qubo.add_var("y" + std::to_string(j));
    r.roles["y:" + std::to_string(j)] = id;
    terms.emplace_back(id, static_cast<double>(std::uint64_t{1} << j));
  }
  r.qubo.add_square(1.0, 0.0, terms);
  return r;
}

SelectableAdder build_selectable_adder(std::uint64_t n_a, std::uint64_t n_b,
                                       int M) {
  SelectableAdder r;
  r.M = M;
  const int xa = r.qubo.add_var("xa");
  const int xb = r.qubo.add_var("xb");
  r.roles["xa"] = xa;
  r.roles["xb"] = xb;
  const Register out = add_selectable_terms(r.qubo, n_a, Bit::variable(xa), n_b,
                                            Bit::variable(xb), M, "", nullptr);
  for (int j = 0; j <= M; ++j) r.roles["X:" + std::to_string(j)] = out[j].var;
  for (int j = 1; j <= M; ++j) r.roles["Z:" + std::to_string(j)] = 2 + 2 * j - 1;
  return r;
}

Clamped clamp(const Qubo& q, std::span<const std::pair<int, int>> fixed) {
  std::vector<int> value(q.num_vars(), 0);
  std::vector<bool> is_fixed(q.num_vars(), false);
  for (auto [v, val] : fixed) {
    if (v < 0 || v >= q.num_vars())
      throw InvalidParameter("clamp: unknown variable " + std::to_string(v));
    const bool ok = q.domain() == Domain::Binary ? (val == 0 || val == 1)
                                                 : (val == -1 || val == 1);
    if (!ok) throw InvalidAssignment("clamp: value outside domain");
    is_fixed[v] = true;
    value[v] = val;
  }
  Clamped out;
  out.new_id.assign(q.num_vars(), -1);
  int next = 0;
  std::vector<std::string> names;
  for (int v = 0; v < q.num_vars(); ++v)
    if (!is_fixed[v]) {
      out.new_id[v] = next++;
      if (!q.var_names().empty()) names.push_back(q.name(v));
    }
  out.qubo = Qubo(next, q.domain());
  if (!q.var_names().empty()) out.qubo.set_names(std::move(names));
  out.qubo.add_offset(q.offset());
  for (auto [v, c] : q.linear()) {
    if (is_fixed[v])
      out.qubo.add_offset(c * value[v]);
    else
      out.qubo.add_linear(out.new_id[v], c);
  }
  for (auto [ij, c] : q.quadratic()) {
    auto [i, j] = ij;
    if (is_fixed[i] && is_fixed[j])
      out.qubo.add_offset(c * value[i] * value[j]);
    else if (is_fixed[i])
      out.qubo.add_linear(out.new_id[j], c * value[i]);
    else if (is_fixed[j])
      out.qubo.add_linear(out.new_id[i], c * value[j]);
    else
      out.qubo.add_quadratic(out.new_id[i], out.new_id[j], c);
  }
  return out;
}

std::uint64_t register_value(const Register& r, std::span<const int> x) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const int bit = r[j].is_const() ? r[j].value : x[r[j].var];
    if (bit) v |= std::uint64_t{1} << j;
  }
  return v;
}

}  // namespace qlat
