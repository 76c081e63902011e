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

#include "qlat/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

namespace qlat {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw DocumentError((path.empty() ? std::string("document") : path) + ": " +
                      what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

const Json& as_tuple(const Json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    fail(path, "expected an array of length " + std::to_string(n));
  return j;
}

int as_int(const Json& j, const std::string& path, int lo = 0,
           int hi = std::numeric_limits<int>::max()) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (j.is_number_unsigned() && j.get<std::uint64_t>() >
                                    static_cast<std::uint64_t>(hi))
    fail(path, "value out of range");
  if (v < lo || v > hi)
    fail(path, "value " + std::to_string(v) + " outside [" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::uint64_t as_u64(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::uint64_t>(j.get<long long>());
  fail(path, "expected a non-negative integer");
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::uint64_t> u64_list(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_u64(j[i], at(path, i)));
  return out;
}

Json bit_matrix(const BitMatrix& m) {
  Json rows = Json::array();
  for (const auto& r : m) {
    Json row = Json::array();
    for (auto b : r) row.push_back(static_cast<int>(b));
    rows.push_back(std::move(row));
  }
  return rows;
}

BitMatrix bit_matrix_from(const Json& j, const std::string& path, int n) {
  as_array(j, path);
  if (static_cast<int>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " rows");
  BitMatrix m(n, std::vector<std::uint8_t>(n, 0));
  for (int r = 0; r < n; ++r) {
    const std::string rp = at(path, r);
    as_array(j[r], rp);
    if (static_cast<int>(j[r].size()) != n)
      fail(rp, "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c)
      m[r][c] = static_cast<std::uint8_t>(as_int(j[r][c], at(rp, c), 0, 1));
  }
  return m;
}

Json edge_list(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  return edges;
}

Graph graph_from(const Json& body, const std::string& path) {
  Graph g;
  const std::string ep = join(path, "edges");
  const Json& edges = as_array(field(body, path, "edges"), ep);
  int top = -1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = at(ep, i);
    as_tuple(edges[i], p, 2);
    const int u = as_int(edges[i][0], at(p, 0));
    const int v = as_int(edges[i][1], at(p, 1));
    if (u == v) fail(p, "self-loop");
    g.edges.emplace_back(u, v);
    top = std::max({top, u, v});
  }
  g.n = top + 1;
  if (const Json* n = optional_field(body, "n")) {
    const int declared = as_int(*n, join(path, "n"));
    if (declared < g.n) fail(join(path, "n"), "smaller than an edge endpoint");
    g.n = declared;
  }
  return g;
}

void put_graph(Json& body, const Graph& g) {
  body["edges"] = edge_list(g);
  int top = -1;
  for (auto [u, v] : g.edges) top = std::max({top, u, v});
  if (g.n != top + 1) body["n"] = g.n;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("syntax: ") + e.what());
  }
}

namespace {

bool flat(const Json& j) {
  if (!j.is_structured()) return true;
  if (j.is_object()) return false;
  for (const Json& e : j)
    if (e.is_object() || (e.is_array() && !flat(e))) return false;
  return true;
}

// Objects are indented; arrays of scalars or scalar arrays stay on one line.
void print(const Json& j, int depth, std::string& out) {
  if (flat(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(2 * (depth + 1), ' ');
  const bool object = j.is_object();
  out += object ? "{" : "[";
  if (j.empty()) {
    out += object ? "}" : "]";
    return;
  }
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out += first ? "\n" : ",\n";
    first = false;
    out += pad;
    if (object) out += Json(it.key()).dump() + ": ";
    print(*it, depth + 1, out);
  }
  out += "\n" + std::string(2 * depth, ' ') + (object ? "}" : "]");
}

}  // namespace

std::string dump_json(const Json& doc) {
  std::string out;
  print(doc, 0, out);
  return out + "\n";
}

Json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw DocumentError(path + ": cannot open");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return parse_json(text);
  } catch (const DocumentError& e) {
    throw DocumentError(path + ": " + e.what());
  }
}

void write_document(const std::string& path, const Json& doc) {
  const std::string text = dump_json(doc);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DocumentError(path + ": cannot write");
  out << text;
}

// Lattice

Json lattice_to_json(const LatticeSpec& spec) {
  Json j;
  const auto& cell = spec.cell;
  if (cell.chimera_J > 0 && cell == chimera_cell(cell.chimera_J)) {
    j["family"] = "chimera";
    j["J"] = cell.chimera_J;
  } else {
    j["n"] = cell.n;
    j["A"] = bit_matrix(cell.A);
    j["A_h"] = bit_matrix(cell.A_h);
    j["A_v"] = bit_matrix(cell.A_v);
  }
  if (spec.square()) {
    j["L"] = spec.rows;
  } else {
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
  }
  return j;
}

LatticeSpec lattice_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a lattice object");
  CellAdjacency cell;
  if (const Json* fam = optional_field(doc, "family")) {
    if (as_string(*fam, "family") != "chimera")
      fail("family", "unsupported lattice family");
    cell = chimera_cell(as_int(field(doc, "", "J"), "J", 1, 64));
  } else {
    cell.n = as_int(field(doc, "", "n"), "n", 1, 4096);
    cell.A = bit_matrix_from(field(doc, "", "A"), "A", cell.n);
    cell.A_h = bit_matrix_from(field(doc, "", "A_h"), "A_h", cell.n);
    cell.A_v = bit_matrix_from(field(doc, "", "A_v"), "A_v", cell.n);
    try {
      cell.check();
    } catch (const InvalidParameter& e) {
      fail("A", e.what());
    }
  }
  int rows = 0, cols = 0;
  if (const Json* L = optional_field(doc, "L")) {
    rows = cols = as_int(*L, "L", 1);
  } else {
    rows = as_int(field(doc, "", "rows"), "rows", 1);
    cols = as_int(field(doc, "", "cols"), "cols", 1);
  }
  return LatticeSpec(std::move(cell), rows, cols);
}

LatticeSpec parse_lattice_arg(std::string_view text) {
  constexpr std::string_view prefix = "chimera:";
  if (!text.starts_with(prefix))
    throw DocumentError("lattice: expected chimera:J,L");
  std::vector<int> nums;
  std::string_view rest = text.substr(prefix.size());
  while (true) {
    int v = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || v < 1)
      throw DocumentError("lattice: bad number in \"" + std::string(text) +
                          "\"");
    nums.push_back(v);
    rest.remove_prefix(static_cast<std::size_t>(p - rest.data()));
    if (rest.empty()) break;
    if (rest.front() != ',')
      throw DocumentError("lattice: expected ',' in \"" + std::string(text) +
                          "\"");
    rest.remove_prefix(1);
  }
  if (nums.size() == 2) return chimera_spec(nums[0], nums[1]);
  if (nums.size() == 3) return LatticeSpec(chimera_cell(nums[0]), nums[1], nums[2]);
  throw DocumentError("lattice: expected chimera:J,L or chimera:J,R,C");
}

// QUBO

Json qubo_to_json(const Qubo& q, const RoleIndex& roles) {
  Json j;
  j["domain"] = q.domain() == Domain::Binary ? "binary" : "spin";
  j["num_vars"] = q.num_vars();
  j["offset"] = q.offset();
  Json lin = Json::array();
  for (auto [i, c] : q.linear()) lin.push_back({i, c});
  j["linear"] = std::move(lin);
  Json quad = Json::array();
  for (const auto& [ij, c] : q.quadratic())
    quad.push_back({ij.first, ij.second, c});
  j["quadratic"] = std::move(quad);
  if (!q.var_names().empty()) j["var_names"] = q.var_names();
  if (!roles.empty()) {
    Json r = Json::object();
    for (const auto& [name, id] : roles) r[name] = id;
    j["roles"] = std::move(r);
  }
  return j;
}

Qubo qubo_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a QUBO object");
  const std::string dom = as_string(field(doc, "", "domain"), "domain");
  if (dom != "binary" && dom != "spin")
    fail("domain", "expected \"binary\" or \"spin\"");
  const int n = as_int(field(doc, "", "num_vars"), "num_vars");
  Qubo q(n, dom == "binary" ? Domain::Binary : Domain::Spin);
  q.add_offset(as_double(field(doc, "", "offset"), "offset"));
  const Json& lin = as_array(field(doc, "", "linear"), "linear");
  for (std::size_t k = 0; k < lin.size(); ++k) {
    const std::string p = at("linear", k);
    as_tuple(lin[k], p, 2);
    const int i = as_int(lin[k][0], at(p, 0), 0, n - 1);
    q.add_linear(i, as_double(lin[k][1], at(p, 1)));
  }
  const Json& quad = as_array(field(doc, "", "quadratic"), "quadratic");
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::string p = at("quadratic", k);
    as_tuple(quad[k], p, 3);
    const int i = as_int(quad[k][0], at(p, 0), 0, n - 1);
    const int jj = as_int(quad[k][1], at(p, 1), 0, n - 1);
    if (i >= jj) fail(p, "pairs must satisfy i < j");
    q.add_quadratic(i, jj, as_double(quad[k][2], at(p, 2)));
  }
  if (const Json* names = optional_field(doc, "var_names")) {
    as_array(*names, "var_names");
    if (static_cast<int>(names->size()) != n)
      fail("var_names", "expected " + std::to_string(n) + " names");
    std::vector<std::string> v;
    for (std::size_t k = 0; k < names->size(); ++k)
      v.push_back(as_string((*names)[k], at("var_names", k)));
    q.set_names(std::move(v));
  }
  return q;
}

RoleIndex roles_from_json(const Json& doc) {
  RoleIndex roles;
  const Json* r = doc.is_object() ? optional_field(doc, "roles") : nullptr;
  if (!r) return roles;
  if (!r->is_object()) fail("roles", "expected an object");
  for (const auto& [name, id] : r->items())
    roles[name] = as_int(id, join("roles", name));
  return roles;
}

// Embedding

Json embedding_to_json(const MinorEmbedding& e, const CellLayout& layout) {
  Json j;
  j["lattice"] = lattice_to_json(e.lattice);
  j["alpha"] = e.alpha;
  bool named = static_cast<int>(e.names.size()) == e.num_logical();
  std::set<std::string> seen;
  for (const auto& s : e.names)
    if (s.empty() || !seen.insert(s).second) named = false;
  Json chains = Json::object();
  for (int v = 0; v < e.num_logical(); ++v)
    chains[named ? e.names[v] : std::to_string(v)] = e.chains[v];
  j["chains"] = std::move(chains);
  if (!layout.empty()) {
    Json l = Json::object();
    for (const auto& [node, ij] : layout) l[node] = {ij[0], ij[1]};
    j["layout"] = std::move(l);
  }
  return j;
}

MinorEmbedding embedding_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected an embedding object");
  MinorEmbedding e;
  try {
    e.lattice = lattice_from_json(field(doc, "", "lattice"));
  } catch (const DocumentError& err) {
    throw DocumentError(std::string("lattice.") + err.what());
  }
  e.alpha = as_double(field(doc, "", "alpha"), "alpha");
  const Json& chains = field(doc, "", "chains");
  if (!chains.is_object()) fail("chains", "expected an object");
  const int nv = e.lattice.num_vertices();
  bool indexed = true;
  int k = 0;
  for (const auto& [name, list] : chains.items()) {
    const std::string p = join("chains", name);
    as_array(list, p);
    std::vector<int> chain;
    for (std::size_t i = 0; i < list.size(); ++i)
      chain.push_back(as_int(list[i], at(p, i), 0, nv - 1));
    e.chains.push_back(std::move(chain));
    e.names.push_back(name);
    if (name != std::to_string(k++)) indexed = false;
  }
  if (indexed) e.names.clear();
  return e;
}

CellLayout layout_from_json(const Json& doc) {
  CellLayout layout;
  const Json* l = doc.is_object() ? optional_field(doc, "layout") : nullptr;
  if (!l) return layout;
  if (!l->is_object()) fail("layout", "expected an object");
  for (const auto& [node, ij] : l->items()) {
    const std::string p = join("layout", node);
    as_tuple(ij, p, 2);
    layout[node] = {as_int(ij[0], at(p, 0)), as_int(ij[1], at(p, 1))};
  }
  return layout;
}

// Instances

Json instance_to_json(const ProblemInstance& inst) {
  Json j;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        Json body;
        if constexpr (std::is_same_v<T, PartitionInstance>) {
          body["numbers"] = x.numbers;
          j["partition"] = std::move(body);
        } else if constexpr (std::is_same_v<T, KnapsackInstance>) {
          body["values"] = x.values;
          body["weights"] = x.weights;
          body["capacity"] = x.capacity;
          j["knapsack"] = std::move(body);
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          put_graph(body, x.graph);
          body["q"] = x.q;
          j["coloring"] = std::move(body);
        } else if constexpr (std::is_same_v<T, HamcycleInstance>) {
          put_graph(body, x.graph);
          j["hamcycle"] = std::move(body);
        } else if constexpr (std::is_same_v<T, UnaryRequest>) {
          body["N"] = x.N;
          j["unary"] = std::move(body);
        } else {
          body["n"] = x.n;
          j["adder"] = std::move(body);
        }
      },
      inst);
  return j;
}

ProblemInstance instance_from_json(const Json& doc) {
  if (!doc.is_object() || doc.size() != 1)
    fail("", "expected an object with exactly one instance key");
  const auto& [kind, body] = *doc.items().begin();
  if (!body.is_object()) fail(kind, "expected an object");
  if (kind == "partition") {
    PartitionInstance p;
    p.numbers = u64_list(field(body, kind, "numbers"), join(kind, "numbers"));
    return p;
  }
  if (kind == "knapsack") {
    KnapsackInstance k;
    k.values = u64_list(field(body, kind, "values"), join(kind, "values"));
    k.weights = u64_list(field(body, kind, "weights"), join(kind, "weights"));
    k.capacity = as_u64(field(body, kind, "capacity"), join(kind, "capacity"));
    if (k.values.size() != k.weights.size())
      fail(join(kind, "weights"), "length differs from values");
    return k;
  }
  if (kind == "coloring") {
    ColoringInstance c;
    c.graph = graph_from(body, kind);
    c.q = as_int(field(body, kind, "q"), join(kind, "q"), 1);
    return c;
  }
  if (kind == "hamcycle") return HamcycleInstance{graph_from(body, kind)};
  if (kind == "unary")
    return UnaryRequest{as_int(field(body, kind, "N"), join(kind, "N"), 1)};
  if (kind == "adder")
    return AdderRequest{as_int(field(body, kind, "n"), join(kind, "n"), 1)};
  fail(kind, "unknown instance type");
}

std::string instance_kind(const ProblemInstance& inst) {
  return instance_to_json(inst).begin().key();
}

// Tile plans

Json tile_plan_to_json(const TilePlan& plan) {
  Json j;
  j["tile_side"] = plan.tile_side;
  Json grid = Json::array();
  int top = -1;
  for (int r = 0; r < plan.rows; ++r) {
    Json row = Json::array();
    for (int c = 0; c < plan.cols; ++c) {
      const TileRole& t = plan.at(r, c);
      switch (t.kind) {
        case TileKind::Empty:
          row.push_back("-");
          break;
        case TileKind::Vertex:
          row.push_back("v" + std::to_string(t.vertex));
          top = std::max(top, t.vertex);
          break;
        case TileKind::Crossing: {
          const bool inferred =
              r > 0 && c > 0 &&
              plan.at(r, c - 1).horizontal_carrier() == t.vertex &&
              plan.at(r - 1, c).vertical_carrier() == t.vertical;
          row.push_back(inferred ? std::string("x")
                                 : "x" + std::to_string(t.vertex) + "," +
                                       std::to_string(t.vertical));
          top = std::max({top, t.vertex, t.vertical});
          break;
        }
      }
    }
    grid.push_back(std::move(row));
  }
  j["grid"] = std::move(grid);
  Json edges = Json::array();
  for (const auto& e : plan.edges) {
    edges.push_back({e.u, e.v, {e.a.r, e.a.c}, {e.b.r, e.b.c}});
    top = std::max({top, e.u, e.v});
  }
  j["edges"] = std::move(edges);
  if (plan.num_vertices != top + 1) j["num_vertices"] = plan.num_vertices;
  return j;
}

TilePlan tile_plan_from_json(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a tile plan object");
  TilePlan p;
  p.tile_side = as_int(field(doc, "", "tile_side"), "tile_side", 1);
  const Json& grid = as_array(field(doc, "", "grid"), "grid");
  p.rows = static_cast<int>(grid.size());
  int top = -1;
  for (int r = 0; r < p.rows; ++r) {
    const std::string rp = at("grid", r);
    as_array(grid[r], rp);
    if (r == 0) p.cols = static_cast<int>(grid[0].size());
    if (static_cast<int>(grid[r].size()) != p.cols) fail(rp, "ragged grid");
    for (int c = 0; c < p.cols; ++c) {
      const std::string cp = at(rp, c);
      const std::string s = as_string(grid[r][c], cp);
      auto number = [&](std::string_view t) {
        int v = -1;
        auto [e, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || e != t.data() + t.size() || v < 0)
          fail(cp, "bad tile \"" + s + "\"");
        return v;
      };
      TileRole role;
      if (s == "-") {
        role = TileRole::empty();
      } else if (s.size() > 1 && s[0] == 'v') {
        role = TileRole::owned(number(std::string_view(s).substr(1)));
      } else if (s == "x") {
        if (r == 0 || c == 0)
          fail(cp, "crossing on the border needs explicit carriers \"xH,V\"");
        role = TileRole::crossing(p.grid[r * p.cols + c - 1].horizontal_carrier(),
                                  p.grid[(r - 1) * p.cols + c].vertical_carrier());
        if (role.vertex < 0 || role.vertical < 0)
          fail(cp, "crossing carriers cannot be inferred from neighbours");
      } else if (s.size() > 1 && s[0] == 'x') {
        const auto comma = s.find(',');
        if (comma == std::string::npos) fail(cp, "bad tile \"" + s + "\"");
        role = TileRole::crossing(
            number(std::string_view(s).substr(1, comma - 1)),
            number(std::string_view(s).substr(comma + 1)));
      } else {
        fail(cp, "bad tile \"" + s + "\"");
      }
      top = std::max({top, role.vertex, role.vertical});
      p.grid.push_back(role);
    }
  }
  const Json& edges = as_array(field(doc, "", "edges"), "edges");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string ep = at("edges", k);
    as_tuple(edges[k], ep, 4);
    auto pos = [&](const Json& j, const std::string& path) {
      as_tuple(j, path, 2);
      return TilePos{as_int(j[0], at(path, 0), 0, std::max(p.rows - 1, 0)),
                     as_int(j[1], at(path, 1), 0, std::max(p.cols - 1, 0))};
    };
    EdgeRealization e{as_int(edges[k][0], at(ep, 0)),
                      as_int(edges[k][1], at(ep, 1)), pos(edges[k][2], at(ep, 2)),
                      pos(edges[k][3], at(ep, 3))};
    top = std::max({top, e.u, e.v});
    p.edges.push_back(e);
  }
  p.num_vertices = top + 1;
  if (const Json* n = optional_field(doc, "num_vertices")) {
    p.num_vertices = as_int(*n, "num_vertices");
    if (p.num_vertices <= top)
      fail("num_vertices", "smaller than a referenced vertex");
  }
  p.chain_routes.assign(p.num_vertices, {});
  for (int r = 0; r < p.rows; ++r)
    for (int c = 0; c < p.cols; ++c) {
      const TileRole& t = p.at(r, c);
      if (t.kind == TileKind::Empty) continue;
      p.chain_routes[t.vertex].push_back({r, c});
      if (t.kind == TileKind::Crossing) p.chain_routes[t.vertical].push_back({r, c});
    }
  return p;
}

// Cycles

Json cycle_to_json(std::span<const int> cycle) {
  Json j;
  j["cycle"] = std::vector<int>(cycle.begin(), cycle.end());
  return j;
}

std::vector<int> cycle_from_json(const Json& doc) {
  const Json& c = as_array(field(doc, "", "cycle"), "cycle");
  std::vector<int> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    out.push_back(as_int(c[i], at("cycle", i)));
  return out;
}

}  // namespace qlat
