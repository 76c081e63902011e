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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "qlat/io.hpp"
#include "qlat/pipeline.hpp"

namespace {

using namespace qlat;

constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct Options {
  std::string input;
  std::string out;
  std::string lattice;
  std::string strategy;
  std::string solver = "brute";
  std::uint64_t seed = 0;
  bool normalize = false;
  std::optional<double> noise;
  int sweeps = 1000;
  int restarts = 10;
  std::string qubo;
  bool complete = false;
  std::string kind;
  std::map<std::string, double> params;
  int n_min = 1;
  int n_max = 20;
  std::string delimiter = "\t";
  int clique = 0;
};

std::optional<LatticeSpec> lattice_option(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  if (arg.rfind("chimera:", 0) == 0) return parse_lattice_arg(arg);
  return lattice_from_json(read_document(arg));
}

EmbedSettings embed_settings(const Options& o, const ProblemInstance* inst) {
  EmbedSettings s;
  s.strategy = !o.strategy.empty() ? parse_strategy(o.strategy)
               : inst              ? default_strategy(*inst)
                                   : Strategy::Tree;
  s.lattice = lattice_option(o.lattice);
  s.normalize = o.normalize;
  s.noise = o.noise;
  s.seed = o.seed;
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw DocumentError(path + ": cannot write");
  f << text;
}

int run(const std::string& command, const Options& o) {
  if (command == "lattice") {
    auto spec = lattice_option(o.lattice);
    if (!spec) throw DocumentError("lattice: --lattice is required");
    write_document(o.out, cmd_lattice(*spec));
    return 0;
  }
  if (command == "embed" && o.clique > 0) {
    const auto spec = lattice_option(o.lattice);
    const int J = spec ? spec->cell.chimera_J : 4;
    if (J < 1) throw UnsupportedCell("clique embeddings need a chimera cell");
    EmbeddedQubo e;
    e.embedding = embed_complete_chimera(o.clique, J);
    e.vertex_of.clear();
    if (spec) e = rehost(e, *spec);
    write_document(o.out, embedding_to_json(e.embedding));
    return 0;
  }
  if (command == "embed" && o.input.empty())
    throw DocumentError("an input document or --clique is required");
  if (command == "build" || command == "embed") {
    const ProblemInstance inst = instance_from_json(read_document(o.input));
    const EmbedSettings s = embed_settings(o, &inst);
    write_document(o.out, command == "build" ? cmd_build(inst, s.strategy)
                                             : cmd_embed(inst, s));
    return 0;
  }
  if (command == "solve") {
    const Json doc = read_document(o.input);
    std::optional<ProblemInstance> inst;
    if (!doc.contains("embedding")) inst = instance_from_json(doc);
    SolveSettings solve;
    solve.solver = parse_solver(o.solver);
    solve.seed = o.seed;
    solve.sweeps = o.sweeps;
    solve.restarts = o.restarts;
    CommandResult r = cmd_solve(doc, embed_settings(o, inst ? &*inst : nullptr), solve);
    write_document(o.out, r.doc);
    return r.exit_code;
  }
  if (command == "validate") {
    std::optional<Qubo> logical;
    if (!o.qubo.empty()) logical = qubo_from_json(read_document(o.qubo));
    CommandResult r = cmd_validate(read_document(o.input), logical, o.complete);
    write_document(o.out, r.doc);
    return r.exit_code;
  }
  if (command == "gap") {
    write_document(o.out, cmd_gap(read_document(o.input)));
    return 0;
  }
  if (command == "predict") {
    write_document(o.out, cmd_predict(o.kind, o.params));
    return 0;
  }
  if (command == "cartoon") {
    if (o.delimiter.size() != 1) throw DocumentError("cartoon: delimiter must be one character");
    write_text(o.out, cmd_cartoon(o.n_min, o.n_max, o.delimiter[0]));
    return 0;
  }
  throw DocumentError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlat: compile problems onto lattice annealer graphs"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* c, const char* what) {
    c->add_option("input", o.input, what)->required();
  };
  auto out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output path, stdout by default");
  };
  auto embed_flags = [&](CLI::App* c) {
    c->add_option("--lattice", o.lattice, "Lattice document path or chimera:J,L");
    c->add_option("--strategy", o.strategy, "tree, complete or tiles")
        ->check(CLI::IsMember({"tree", "complete", "tiles"}));
    c->add_flag("--normalize", o.normalize, "Scale to |J| <= 1, |h| <= 2");
    c->add_option("--noise", o.noise, "Gaussian coefficient noise, relative sigma");
    c->add_option("--seed", o.seed, "Seed for every random draw");
  };

  auto* lattice = app.add_subcommand("lattice", "Emit a lattice document");
  lattice->add_option("--lattice", o.lattice, "chimera:J,L or a document path")->required();
  out(lattice);

  auto* build = app.add_subcommand("build", "Compile an instance to a logical QUBO");
  input(build, "Instance document");
  build->add_option("--strategy", o.strategy, "tree, complete or tiles")
      ->check(CLI::IsMember({"tree", "complete", "tiles"}));
  out(build);

  auto* embed = app.add_subcommand("embed", "Embed an instance onto the lattice");
  embed->add_option("input", o.input, "Instance document");
  embed->add_option("--clique", o.clique, "Emit the complete-graph embedding K_N instead")
      ->check(CLI::PositiveNumber);
  embed_flags(embed);
  out(embed);

  auto* solve = app.add_subcommand("solve", "Solve, unembed and decode");
  input(solve, "Instance or embedded document");
  embed_flags(solve);
  solve->add_option("--solver", o.solver, "brute or anneal")
      ->check(CLI::IsMember({"brute", "anneal"}));
  solve->add_option("--sweeps", o.sweeps, "Annealing sweeps per restart");
  solve->add_option("--restarts", o.restarts, "Annealing restarts");
  out(solve);

  auto* validate = app.add_subcommand("validate", "Check an embedding");
  input(validate, "Embedding or embedded document");
  validate->add_option("--qubo", o.qubo, "Logical QUBO whose graph must embed");
  validate->add_flag("--complete", o.complete, "Check against the complete graph");
  out(validate);

  auto* gap = app.add_subcommand("gap", "Classical gap of a QUBO or coloring tiles");
  input(gap, "QUBO, embedded or coloring document");
  out(gap);

  auto* predict = app.add_subcommand("predict", "Evaluate size formulas");
  predict->add_option("kind", o.kind, "numpart, knapsack, unary, clique or hamcycle")
      ->required();
  for (const char* p : {"N", "M", "J", "value-bits", "weight-bits", "LG"})
    predict->add_option_function<double>(
        std::string("--") + p, [&o, p](double v) { o.params[p] = v; }, p);
  out(predict);

  auto* cartoon = app.add_subcommand("cartoon", "Two-level annealing model report");
  cartoon->add_option("--n-min", o.n_min, "Smallest N");
  cartoon->add_option("--n-max", o.n_max, "Largest N");
  cartoon->add_option("--delimiter", o.delimiter, "Column delimiter");
  out(cartoon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const DocumentError& e) {
    std::cerr << "qlat " << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qlat " << command << ": malformed document: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qlat " << command << ": " << e.what() << "\n";
    return kInvalid;
  }
}
