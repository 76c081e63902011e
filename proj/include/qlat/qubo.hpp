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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlat/errors.hpp"

namespace qlat {

inline constexpr double kTol = 1e-9;

enum class Domain { Binary, Spin };

// Values are 0/1 for binary and -1/+1 for spin objectives.
using Assignment = std::vector<int>;

class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(int num_vars, Domain domain = Domain::Binary)
      : num_vars_(num_vars), domain_(domain) {}

  int num_vars() const { return num_vars_; }
  Domain domain() const { return domain_; }
  double offset() const { return offset_; }
  const std::map<int, double>& linear() const { return linear_; }
  const std::map<std::pair<int, int>, double>& quadratic() const {
    return quadratic_;
  }
  const std::vector<std::string>& var_names() const { return names_; }

  // Grows num_vars if needed; returns the new id.
  int add_var(std::string name = {});
  void resize(int num_vars);
  void set_names(std::vector<std::string> names);
  const std::string& name(int v) const;

  void add_offset(double c) { offset_ += c; }
  void add_linear(int i, double c);
  // Diagonal pairs fold into linear terms (binary) or the offset (spin).
  void add_quadratic(int i, int j, double c);
  // Adds w * (constant + sum c_k v_k)^2.
  void add_square(double w, double constant,
                  std::span<const std::pair<int, double>> terms);
  void add(const Qubo& other);
  void scale(double s);
  // Drops coefficients with magnitude below tol.
  void prune(double tol = 0.0);

  double lin(int i) const;
  double quad(int i, int j) const;

  double evaluate(std::span<const int> x) const;

  bool approx_equal(const Qubo& other, double tol = 1e-12) const;
  bool operator==(const Qubo&) const = default;

 private:
  void grow(int v);

  int num_vars_ = 0;
  Domain domain_ = Domain::Binary;
  double offset_ = 0.0;
  std::map<int, double> linear_;
  std::map<std::pair<int, int>, double> quadratic_;
  std::vector<std::string> names_;
};

Qubo to_spin(const Qubo& q);
Qubo to_binary(const Qubo& q);

struct Normalized {
  Qubo qubo;
  double scale = 1.0;
};

Normalized normalize_couplings(const Qubo& q);
double max_offdiagonal(const Qubo& q);
double max_field(const Qubo& q);

struct NoiseModel {
  double sigma_scale = 0.03;
  std::uint64_t seed = 0;
};

Qubo apply_noise(const Qubo& q, const NoiseModel& m);

struct Spectrum {
  double ground_energy = 0.0;
  std::vector<Assignment> ground_states;
  double gap = 0.0;
  std::uint64_t state_count_at_ground = 0;
  std::uint64_t states_enumerated = 0;
  bool degenerate = false;
  // True if ground_states was truncated at the storage cap.
  bool truncated = false;
};

struct BruteForceOptions {
  int var_cap = 28;
  std::size_t max_stored_states = 1 << 16;
  int threads = 0;  // 0 = hardware concurrency
};

Spectrum brute_force(const Qubo& q, const BruteForceOptions& opt = {});

using Predicate = std::function<bool(std::span<const int>)>;

Spectrum restricted_gap(const Qubo& q, const Predicate& keep,
                        const BruteForceOptions& opt = {});

// Enumerates an explicit subspace: every assignment of `free_bits` bits is
// lifted to a full assignment by `lift`.
Spectrum restricted_gap_generated(
    const Qubo& q, int free_bits,
    const std::function<void(std::uint64_t, Assignment&)>& lift,
    const BruteForceOptions& opt = {});

// Exact ground energy, ground count and gap by variable elimination over the
// (min, +) semiring keeping the two lowest levels. Cost is exponential only in
// the induced width; scopes above max_scope raise CapExceeded. ground_states
// is left empty. `clamp` fixes variables to domain values.
Spectrum eliminate(const Qubo& q,
                   std::span<const std::pair<int, int>> clamp = {},
                   int max_scope = 22);

struct AnnealOptions {
  int sweeps = 1000;
  int restarts = 10;
  std::uint64_t seed = 0;
  double t_hot = 0.0;   // 0 = derived from coefficients
  double t_cold = 0.0;  // 0 = derived from coefficients
  // Variable groups also tried as one joint flip each sweep, e.g. chains.
  std::vector<std::vector<int>> clusters;
};

struct AnnealResult {
  Assignment assignment;
  double energy = 0.0;
};

// One exact ground assignment: exhaustive search up to 20 variables,
// elimination with traceback above that.
AnnealResult exact_minimize(const Qubo& q, int max_scope = 22);

AnnealResult anneal_solve(const Qubo& q, const AnnealOptions& opt = {});

}  // namespace qlat
