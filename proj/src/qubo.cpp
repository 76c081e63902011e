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

#include "qlat/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <thread>

namespace qlat {

int Qubo::add_var(std::string name) {
  const int id = num_vars_++;
  if (!name.empty() || !names_.empty()) {
    names_.resize(num_vars_);
    names_[id] = std::move(name);
  }
  return id;
}

void Qubo::resize(int num_vars) {
  if (num_vars < num_vars_) throw InvalidParameter("Qubo::resize: shrinking");
  num_vars_ = num_vars;
  if (!names_.empty()) names_.resize(num_vars_);
}

void Qubo::set_names(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != num_vars_)
    throw InvalidParameter("Qubo::set_names: size mismatch");
  names_ = std::move(names);
}

const std::string& Qubo::name(int v) const {
  static const std::string empty;
  return v < static_cast<int>(names_.size()) ? names_[v] : empty;
}

void Qubo::grow(int v) {
  if (v < 0) throw InvalidParameter("Qubo: negative variable id");
  if (v >= num_vars_) resize(v + 1);
}

void Qubo::add_linear(int i, double c) {
  grow(i);
  linear_[i] += c;
}

void Qubo::add_quadratic(int i, int j, double c) {
  grow(i);
  grow(j);
  if (i == j) {
    if (domain_ == Domain::Binary)
      linear_[i] += c;
    else
      offset_ += c;
    return;
  }
  if (i > j) std::swap(i, j);
  quadratic_[{i, j}] += c;
}

void Qubo::add_square(double w, double constant,
                      std::span<const std::pair<int, double>> terms) {
  offset_ += w * constant * constant;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto [vk, ck] = terms[k];
    add_linear(vk, 2.0 * w * constant * ck);
    add_quadratic(vk, vk, w * ck * ck);
    for (std::size_t l = k + 1; l < terms.size(); ++l)
      add_quadratic(vk, terms[l].first, 2.0 * w * ck * terms[l].second);
  }
}

void Qubo::add(const Qubo& other) {
  if (other.domain_ != domain_) throw InvalidParameter("Qubo::add: domain");
  if (other.num_vars_ > num_vars_) resize(other.num_vars_);
  offset_ += other.offset_;
  for (auto [i, c] : other.linear_) linear_[i] += c;
  for (auto [ij, c] : other.quadratic_) quadratic_[ij] += c;
}

void Qubo::scale(double s) {
  offset_ *= s;
  for (auto& [i, c] : linear_) c *= s;
  for (auto& [ij, c] : quadratic_) c *= s;
}

void Qubo::prune(double tol) {
  std::erase_if(linear_, [tol](const auto& kv) {
    return std::abs(kv.second) <= tol;
  });
  std::erase_if(quadratic_, [tol](const auto& kv) {
    return std::abs(kv.second) <= tol;
  });
}

double Qubo::lin(int i) const {
  auto it = linear_.find(i);
  return it == linear_.end() ? 0.0 : it->second;
}

double Qubo::quad(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = quadratic_.find({i, j});
  return it == quadratic_.end() ? 0.0 : it->second;
}

double Qubo::evaluate(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != num_vars_)
    throw InvalidAssignment("evaluate: assignment length mismatch");
  for (int v : x) {
    const bool ok = domain_ == Domain::Binary ? (v == 0 || v == 1)
                                              : (v == -1 || v == 1);
    if (!ok) throw InvalidAssignment("evaluate: value outside domain");
  }
  double e = offset_;
  for (auto [i, c] : linear_) e += c * x[i];
  for (auto [ij, c] : quadratic_) e += c * x[ij.first] * x[ij.second];
  return e;
}

bool Qubo::approx_equal(const Qubo& other, double tol) const {
  if (num_vars_ != other.num_vars_ || domain_ != other.domain_) return false;
  if (std::abs(offset_ - other.offset_) > tol) return false;
  for (int i = 0; i < num_vars_; ++i)
    if (std::abs(lin(i) - other.lin(i)) > tol) return false;
  for (auto [ij, c] : quadratic_)
    if (std::abs(c - other.quad(ij.first, ij.second)) > tol) return false;
  for (auto [ij, c] : other.quadratic_)
    if (std::abs(c - quad(ij.first, ij.second)) > tol) return false;
  return true;
}

Qubo to_spin(const Qubo& q) {
  if (q.domain() == Domain::Spin) return q;
  Qubo s(q.num_vars(), Domain::Spin);
  if (!q.var_names().empty()) s.set_names(q.var_names());
  s.add_offset(q.offset());
  for (auto [i, c] : q.linear()) {
    s.add_offset(c / 2);
    s.add_linear(i, c / 2);
  }
  for (auto [ij, c] : q.quadratic()) {
    s.add_offset(c / 4);
    s.add_linear(ij.first, c / 4);
    s.add_linear(ij.second, c / 4);
    s.add_quadratic(ij.first, ij.second, c / 4);
  }
  return s;
}

Qubo to_binary(const Qubo& q) {
  if (q.domain() == Domain::Binary) return q;
  Qubo b(q.num_vars(), Domain::Binary);
  if (!q.var_names().empty()) b.set_names(q.var_names());
  b.add_offset(q.offset());
  for (auto [i, c] : q.linear()) {
    b.add_offset(-c);
    b.add_linear(i, 2 * c);
  }
  for (auto [ij, c] : q.quadratic()) {
    b.add_offset(c);
    b.add_linear(ij.first, -2 * c);
    b.add_linear(ij.second, -2 * c);
    b.add_quadratic(ij.first, ij.second, 4 * c);
  }
  return b;
}

double max_offdiagonal(const Qubo& q) {
  double m = 0;
  for (auto [ij, c] : q.quadratic()) m = std::max(m, std::abs(c));
  return m;
}

double max_field(const Qubo& q) {
  double m = 0;
  for (auto [i, c] : q.linear()) m = std::max(m, std::abs(c));
  return m;
}

Normalized normalize_couplings(const Qubo& q) {
  if (q.domain() != Domain::Spin)
    throw InvalidParameter("normalize_couplings: spin form required");
  const double off = max_offdiagonal(q);
  const double field = max_field(q);
  double scale = 1.0;
  if (off > 1.0) scale = std::min(scale, 1.0 / off);
  if (field > 2.0) scale = std::min(scale, 2.0 / field);
  Qubo out = q;
  out.scale(scale);
  return {std::move(out), scale};
}

Qubo apply_noise(const Qubo& q, const NoiseModel& m) {
  if (q.domain() != Domain::Spin)
    throw InvalidParameter("apply_noise: spin form required");
  Qubo out(q.num_vars(), Domain::Spin);
  if (!q.var_names().empty()) out.set_names(q.var_names());
  out.add_offset(q.offset());
  std::mt19937_64 rng(m.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto [i, c] : q.linear()) {
    if (c == 0.0) continue;
    out.add_linear(i, c + m.sigma_scale * normal(rng));
  }
  for (auto [ij, c] : q.quadratic()) {
    if (c == 0.0) continue;
    out.add_quadratic(ij.first, ij.second, c + m.sigma_scale * normal(rng));
  }
  return out;
}

namespace {

// Dense binary form used by the enumerators.
struct Dense {
  int n = 0;
  double offset = 0;
  std::vector<double> lin;
  std::vector<std::vector<std::pair<int, double>>> adj;

  explicit Dense(const Qubo& src) {
    const Qubo b = to_binary(src);
    n = b.num_vars();
    offset = b.offset();
    lin.assign(n, 0.0);
    adj.assign(n, {});
    for (auto [i, c] : b.linear()) lin[i] = c;
    for (auto [ij, c] : b.quadratic()) {
      adj[ij.first].emplace_back(ij.second, c);
      adj[ij.second].emplace_back(ij.first, c);
    }
  }

  double energy(std::uint64_t mask) const {
    double e = offset;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      e += lin[i];
      for (auto [j, c] : adj[i])
        if (j > i && ((mask >> j) & 1)) e += c;
    }
    return e;
  }
};

struct Tracker {
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  std::uint64_t count = 0;
  std::uint64_t seen = 0;
  std::vector<std::uint64_t> states;
  std::size_t cap = 0;
  bool truncated = false;

  explicit Tracker(std::size_t c) : cap(c) {}

  void push(double e, std::uint64_t mask) {
    ++seen;
    if (e < best - kTol) {
      second = std::min(second, best);
      best = e;
      count = 0;
      states.clear();
      truncated = false;
    }
    if (std::abs(e - best) <= kTol) {
      ++count;
      if (states.size() < cap)
        states.push_back(mask);
      else
        truncated = true;
    } else if (e < second) {
      second = e;
    }
  }
};

Tracker merge(std::vector<Tracker>& parts, std::size_t cap) {
  Tracker out(cap);
  for (const auto& t : parts) out.best = std::min(out.best, t.best);
  for (const auto& t : parts) {
    out.seen += t.seen;
    if (t.count == 0) continue;
    if (std::abs(t.best - out.best) <= kTol) {
      out.count += t.count;
      out.truncated = out.truncated || t.truncated;
      for (auto s : t.states) {
        if (out.states.size() < cap)
          out.states.push_back(s);
        else
          out.truncated = true;
      }
      out.second = std::min(out.second, t.second);
    } else {
      out.second = std::min(out.second, t.best);
    }
  }
  return out;
}

Assignment decode(std::uint64_t mask, int n, Domain d) {
  Assignment a(n);
  for (int i = 0; i < n; ++i) {
    const int bit = static_cast<int>((mask >> i) & 1);
    a[i] = d == Domain::Binary ? bit : 2 * bit - 1;
  }
  return a;
}

Spectrum finish(Tracker t, int n, Domain d) {
  Spectrum s;
  s.states_enumerated = t.seen;
  s.ground_energy = t.best;
  s.state_count_at_ground = t.count;
  s.truncated = t.truncated;
  std::sort(t.states.begin(), t.states.end());
  for (auto m : t.states) s.ground_states.push_back(decode(m, n, d));
  if (std::isinf(t.second)) {
    s.gap = 0.0;
    s.degenerate = true;
  } else {
    s.gap = t.second - t.best;
  }
  return s;
}

void enumerate_block(const Dense& d, std::uint64_t prefix, int low_bits,
                     Tracker& t) {
  std::uint64_t mask = prefix << low_bits;
  double e = d.energy(mask);
  std::vector<double> field(d.n);
  for (int i = 0; i < d.n; ++i) {
    double f = d.lin[i];
    for (auto [j, c] : d.adj[i])
      if ((mask >> j) & 1) f += c;
    field[i] = f;
  }
  const std::uint64_t count = std::uint64_t{1} << low_bits;
  t.push(e, mask);
  for (std::uint64_t step = 1; step < count; ++step) {
    const int k = std::countr_zero(step);
    const bool on = (mask >> k) & 1;
    e += on ? -field[k] : field[k];
    mask ^= std::uint64_t{1} << k;
    const double sign = on ? -1.0 : 1.0;
    for (auto [j, c] : d.adj[k]) field[j] += sign * c;
    t.push(e, mask);
  }
}

}  // namespace

Spectrum brute_force(const Qubo& q, const BruteForceOptions& opt) {
  const int n = q.num_vars();
  if (n > opt.var_cap || n > 62)
    throw CapExceeded("brute_force: " + std::to_string(n) +
                      " variables exceeds cap " + std::to_string(opt.var_cap));
  const Dense d(q);
  const int low_bits = std::min(n, 16);
  const int high_bits = n - low_bits;
  const std::uint64_t blocks = std::uint64_t{1} << high_bits;
  unsigned workers = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                     : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, blocks)));
  std::vector<Tracker> parts(workers, Tracker(opt.max_stored_states));
  auto run = [&](unsigned w) {
    for (std::uint64_t b = w; b < blocks; b += workers)
      enumerate_block(d, b, low_bits, parts[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return finish(merge(parts, opt.max_stored_states), n, q.domain());
}

Spectrum restricted_gap(const Qubo& q, const Predicate& keep,
                        const BruteForceOptions& opt) {
  const int n = q.num_vars();
  if (n > opt.var_cap || n > 62)
    throw CapExceeded("restricted_gap: variable cap exceeded");
  const Dense d(q);
  Tracker t(opt.max_stored_states);
  Assignment a(n);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    for (int i = 0; i < n; ++i) {
      const int bit = static_cast<int>((m >> i) & 1);
      a[i] = q.domain() == Domain::Binary ? bit : 2 * bit - 1;
    }
    if (keep(a)) t.push(d.energy(m), m);
  }
  if (t.seen == 0) throw InvalidParameter("restricted_gap: empty subspace");
  return finish(std::move(t), n, q.domain());
}

Spectrum restricted_gap_generated(
    const Qubo& q, int free_bits,
    const std::function<void(std::uint64_t, Assignment&)>& lift,
    const BruteForceOptions& opt) {
  if (free_bits > opt.var_cap || free_bits > 62)
    throw CapExceeded("restricted_gap: subspace exceeds cap");
  const int n = q.num_vars();
  Tracker t(opt.max_stored_states);
  Assignment a(n);
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t m = 0; m < total; ++m) {
    lift(m, a);
    t.push(q.evaluate(a), m);
  }
  if (t.seen == 0) throw InvalidParameter("restricted_gap: empty subspace");
  std::vector<std::uint64_t> masks = t.states;
  std::sort(masks.begin(), masks.end());
  Spectrum s = finish(std::move(t), 0, q.domain());
  s.ground_states.clear();
  for (auto m : masks) {
    lift(m, a);
    s.ground_states.push_back(a);
  }
  return s;
}

namespace {

// Two lowest distinct energy levels with multiplicities.
struct Levels {
  double e1 = std::numeric_limits<double>::infinity();
  double c1 = 0;
  double e2 = std::numeric_limits<double>::infinity();
  double c2 = 0;

  void offer(double e, double c) {
    if (c == 0 || std::isinf(e)) return;
    if (std::abs(e - e1) <= kTol) {
      c1 += c;
    } else if (e < e1) {
      e2 = e1;
      c2 = c1;
      e1 = e;
      c1 = c;
    } else if (std::abs(e - e2) <= kTol) {
      c2 += c;
    } else if (e < e2) {
      e2 = e;
      c2 = c;
    }
  }
};

Levels combine(const Levels& a, const Levels& b) {
  Levels r;
  r.offer(a.e1 + b.e1, a.c1 * b.c1);
  r.offer(a.e1 + b.e2, a.c1 * b.c2);
  r.offer(a.e2 + b.e1, a.c2 * b.c1);
  return r;
}

struct Factor {
  std::vector<int> scope;  // sorted variable ids
  std::vector<Levels> table;
};

std::size_t local_index(const std::vector<int>& scope,
                        const std::vector<int>& sub, std::size_t idx) {
  std::size_t out = 0;
  for (std::size_t k = 0, p = 0; k < sub.size(); ++k) {
    while (scope[p] != sub[k]) ++p;
    if ((idx >> p) & 1) out |= std::size_t{1} << k;
  }
  return out;
}

}  // namespace

namespace {

struct TraceStep {
  int pick;
  std::vector<int> scope;
  std::vector<double> best;  // lowest energy per scope assignment
};

Spectrum eliminate_impl(const Qubo& q,
                        std::span<const std::pair<int, int>> clamp,
                        int max_scope, std::vector<TraceStep>* trace,
                        std::vector<int>* fixed_out) {
  const Qubo b = to_binary(q);
  const int n = b.num_vars();
  std::vector<int> fixed(n, -1);
  for (auto [v, val] : clamp) {
    if (v < 0 || v >= n) throw InvalidParameter("eliminate: clamp id");
    fixed[v] = q.domain() == Domain::Binary ? val : (val + 1) / 2;
  }
  double constant = b.offset();
  std::vector<double> lin(n, 0.0);
  for (auto [i, c] : b.linear()) lin[i] += c;
  std::vector<Factor> factors;
  for (auto [ij, c] : b.quadratic()) {
    auto [i, j] = ij;
    if (fixed[i] >= 0 && fixed[j] >= 0) {
      constant += c * fixed[i] * fixed[j];
    } else if (fixed[i] >= 0) {
      lin[j] += c * fixed[i];
    } else if (fixed[j] >= 0) {
      lin[i] += c * fixed[j];
    } else {
      Factor f{{i, j}, std::vector<Levels>(4)};
      for (std::size_t m = 0; m < 4; ++m)
        f.table[m].offer(m == 3 ? c : 0.0, 1);
      factors.push_back(std::move(f));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (fixed[i] >= 0) {
      constant += lin[i] * fixed[i];
      continue;
    }
    Factor f{{i}, std::vector<Levels>(2)};
    f.table[0].offer(0.0, 1);
    f.table[1].offer(lin[i], 1);
    factors.push_back(std::move(f));
  }

  std::vector<bool> alive(n, false);
  std::vector<std::set<int>> nb(n);
  std::vector<std::vector<std::size_t>> touching(n);
  std::vector<bool> live_factor(factors.size(), true);
  for (std::size_t f = 0; f < factors.size(); ++f)
    for (int v : factors[f].scope) {
      touching[v].push_back(f);
      for (int u : factors[f].scope)
        if (u != v) nb[v].insert(u);
    }
  std::set<std::pair<std::size_t, int>> queue;
  for (int i = 0; i < n; ++i)
    if (fixed[i] < 0) {
      alive[i] = true;
      queue.insert({nb[i].size(), i});
    }
  Levels total;
  total.offer(constant, 1);
  while (!queue.empty()) {
    const int pick = queue.begin()->second;
    queue.erase(queue.begin());
    alive[pick] = false;
    std::vector<int> scope(nb[pick].begin(), nb[pick].end());
    scope.push_back(pick);
    std::sort(scope.begin(), scope.end());
    if (static_cast<int>(scope.size()) > max_scope)
      throw CapExceeded("eliminate: induced width exceeds cap");
    std::vector<const Factor*> use;
    for (std::size_t f : touching[pick])
      if (live_factor[f]) {
        use.push_back(&factors[f]);
        live_factor[f] = false;
      }
    const std::size_t size = std::size_t{1} << scope.size();
    TraceStep* step = nullptr;
    if (trace) {
      trace->push_back({pick, scope, std::vector<double>(size)});
      step = &trace->back();
    }
    std::vector<int> out_scope;
    for (int v : scope)
      if (v != pick) out_scope.push_back(v);
    const auto pos = static_cast<std::size_t>(
        std::find(scope.begin(), scope.end(), pick) - scope.begin());
    Factor out{out_scope,
               std::vector<Levels>(std::size_t{1} << out_scope.size())};
    for (std::size_t m = 0; m < size; ++m) {
      Levels acc;
      acc.offer(0.0, 1);
      for (const Factor* f : use)
        acc = combine(acc, f->table[local_index(scope, f->scope, m)]);
      if (step) step->best[m] = acc.e1;
      const std::size_t low = m & ((std::size_t{1} << pos) - 1);
      const std::size_t high = (m >> (pos + 1)) << pos;
      auto& dst = out.table[low | high];
      dst.offer(acc.e1, acc.c1);
      dst.offer(acc.e2, acc.c2);
    }
    for (std::size_t f : touching[pick])
      if (!live_factor[f]) factors[f].table.clear();
    if (out_scope.empty()) {
      total = combine(total, out.table[0]);
      continue;
    }
    const std::size_t id = factors.size();
    for (int u : out_scope) {
      queue.erase({nb[u].size(), u});
      nb[u].erase(pick);
      for (int w : out_scope)
        if (w != u) nb[u].insert(w);
      touching[u].push_back(id);
      queue.insert({nb[u].size(), u});
    }
    factors.push_back(std::move(out));
    live_factor.push_back(true);
  }

  Spectrum s;
  s.ground_energy = total.e1;
  s.state_count_at_ground = static_cast<std::uint64_t>(total.c1);
  if (std::isinf(total.e2)) {
    s.degenerate = true;
    s.gap = 0.0;
  } else {
    s.gap = total.e2 - total.e1;
  }
  s.truncated = true;
  if (fixed_out) *fixed_out = std::move(fixed);
  return s;
}

}  // namespace

Spectrum eliminate(const Qubo& q, std::span<const std::pair<int, int>> clamp,
                   int max_scope) {
  return eliminate_impl(q, clamp, max_scope, nullptr, nullptr);
}

AnnealResult exact_minimize(const Qubo& q, int max_scope) {
  const int n = q.num_vars();
  AnnealResult r;
  if (n <= 20) {
    BruteForceOptions opt;
    opt.max_stored_states = 1;
    const Spectrum s = brute_force(q, opt);
    r.assignment = s.ground_states.front();
    r.energy = q.evaluate(r.assignment);
    return r;
  }
  std::vector<TraceStep> trace;
  std::vector<int> fixed;
  eliminate_impl(q, {}, max_scope, &trace, &fixed);
  std::vector<int> x(n, 0);
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    std::size_t m0 = 0, m1 = 0;
    for (std::size_t k = 0; k < it->scope.size(); ++k) {
      const int v = it->scope[k];
      if (v == it->pick) {
        m1 |= std::size_t{1} << k;
      } else if (x[v]) {
        m0 |= std::size_t{1} << k;
        m1 |= std::size_t{1} << k;
      }
    }
    x[it->pick] = it->best[m1] < it->best[m0] ? 1 : 0;
  }
  r.assignment.resize(n);
  for (int i = 0; i < n; ++i)
    r.assignment[i] = q.domain() == Domain::Binary ? x[i] : 2 * x[i] - 1;
  r.energy = q.evaluate(r.assignment);
  return r;
}

AnnealResult anneal_solve(const Qubo& q, const AnnealOptions& opt) {
  const Dense d(q);
  const int n = d.n;
  for (const auto& cl : opt.clusters)
    for (int k : cl)
      if (k < 0 || k >= n)
        throw InvalidParameter("anneal_solve: cluster member out of range");
  AnnealResult best;
  best.energy = std::numeric_limits<double>::infinity();
  if (n == 0) {
    best.energy = d.offset;
    return best;
  }
  double max_delta = 0, min_delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double s = std::abs(d.lin[i]);
    if (d.lin[i] != 0) min_delta = std::min(min_delta, std::abs(d.lin[i]));
    for (auto [j, c] : d.adj[i]) {
      s += std::abs(c);
      if (c != 0) min_delta = std::min(min_delta, std::abs(c));
    }
    max_delta = std::max(max_delta, s);
  }
  if (max_delta == 0) {
    best.assignment = decode(0, n, q.domain());
    best.energy = d.offset;
    return best;
  }
  const double t_hot = opt.t_hot > 0 ? opt.t_hot : max_delta / std::log(2.0);
  const double t_cold =
      opt.t_cold > 0 ? opt.t_cold : min_delta / std::log(100.0);
  const int sweeps = std::max(1, opt.sweeps);
  const double ratio =
      sweeps > 1 ? std::pow(t_cold / t_hot, 1.0 / (sweeps - 1)) : 1.0;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> x(n), best_x(n);
  std::vector<double> field(n);
  const auto flip = [&](int k) {
    const double delta = x[k] ? -field[k] : field[k];
    const double sign = x[k] ? -1.0 : 1.0;
    x[k] ^= 1;
    for (auto [j, c] : d.adj[k]) field[j] += sign * c;
    return delta;
  };
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    for (auto& v : x) v = static_cast<int>(rng() & 1);
    for (int i = 0; i < n; ++i) {
      double f = d.lin[i];
      for (auto [j, c] : d.adj[i]) f += c * x[j];
      field[i] = f;
    }
    double e = d.offset;
    for (int i = 0; i < n; ++i)
      if (x[i]) {
        e += d.lin[i];
        for (auto [j, c] : d.adj[i])
          if (j > i && x[j]) e += c;
      }
    double run_best = e;
    best_x = x;
    const auto note = [&] {
      if (e < run_best - 1e-12) {
        run_best = e;
        best_x = x;
      }
    };
    double temp = t_hot;
    for (int s = 0; s < sweeps; ++s, temp *= ratio) {
      for (int k = 0; k < n; ++k) {
        const double delta = x[k] ? -field[k] : field[k];
        if (delta > 0 && unit(rng) >= std::exp(-delta / temp)) continue;
        e += flip(k);
        note();
      }
      for (const auto& cl : opt.clusters) {
        double delta = 0;
        for (int k : cl) delta += flip(k);
        if (delta > 0 && unit(rng) >= std::exp(-delta / temp)) {
          for (auto it = cl.rbegin(); it != cl.rend(); ++it) flip(*it);
          continue;
        }
        e += delta;
        note();
      }
    }
    Assignment a(n);
    for (int i = 0; i < n; ++i)
      a[i] = q.domain() == Domain::Binary ? best_x[i] : 2 * best_x[i] - 1;
    const double exact = q.evaluate(a);
    if (exact < best.energy) {
      best.energy = exact;
      best.assignment = std::move(a);
    }
  }
  return best;
}

}  // namespace qlat
