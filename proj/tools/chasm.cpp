// Copyright 2026 The chasm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: generators, passes, pipelines, verification and
// bound reports. Exit codes: 0 ok, 2 bound or equivalence failure, 1 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chasm/abp.hpp"
#include "chasm/corpus.hpp"
#include "chasm/depth.hpp"
#include "chasm/errors.hpp"
#include "chasm/normalize.hpp"
#include "chasm/poly.hpp"
#include "chasm/report.hpp"
#include "json.hpp"

namespace {

using namespace chasm;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kBoundFailure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

bool is_abp_text(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    if (word[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return word == "abp";
  }
  return false;
}

struct Loaded {
  std::optional<Circuit> circuit;
  std::optional<Abp> abp;
};

Loaded load(const std::string& path) {
  std::string text = read_file(path);
  Loaded l;
  if (is_abp_text(text)) l.abp = parse_abp(text);
  else l.circuit = parse_circuit(text);
  return l;
}

Circuit load_circuit(const std::string& path) {
  Loaded l = load(path);
  if (!l.circuit) throw Error(path + " holds a branching program, a circuit is required");
  return *l.circuit;
}

// Passes that need binary products get the lowered circuit.
Circuit binary(const Circuit& c) {
  return check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok ? c : lower_to_binary(c);
}

int finish(const std::vector<PassReport>& reports, const std::string& report_path, bool json) {
  AggregateReport agg = bound_report(reports);
  if (!report_path.empty()) write_text(report_path, agg.json.dump(2) + "\n");
  if (json) std::cout << agg.json.dump(2) << "\n";
  else std::cerr << agg.table;
  return agg.all_bounds_ok ? kOk : kBoundFailure;
}

VerifyConfig verify_config(const std::string& mode, std::size_t trials, std::uint64_t seed) {
  VerifyConfig v;
  v.trials = trials;
  v.seed = seed;
  v.cap = monomial_cap_from_env();
  if (mode == "exact") v.kind = VerifyConfig::Kind::Exact;
  else if (mode == "random") v.kind = VerifyConfig::Kind::Random;
  else if (mode == "none") v.kind = VerifyConfig::Kind::None;
  else throw Error("unknown verification mode '" + mode + "'");
  return v;
}

std::string stats_text(const CircuitStats& s) {
  std::ostringstream os;
  os << "size " << s.size << "\ndepth " << s.depth << "\nformal_degree " << s.formal_degree << "\ninputs "
     << s.num_inputs << "\nconstants " << s.num_consts << "\nadditions " << s.num_adds << "\nsubtractions "
     << s.num_subs << "\nmultiplications " << s.num_muls << "\nmax_mul_fanin " << s.max_mul_fanin
     << "\nmax_add_fanin " << s.max_add_fanin << "\nmax_abs_constant " << to_string(s.max_abs_constant)
     << "\nmax_add_total_weight " << to_string(s.max_add_total_weight) << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chasm: arithmetic circuit depth-reduction passes"};
  app.require_subcommand(1);

  std::string out_path, report_path, mode, verify_mode = "exact";
  bool json = false;
  unsigned delta = 2;
  std::size_t trials = 20;
  std::uint64_t seed = 1;

  // gen
  CorpusSpec spec;
  std::string family;
  auto* gen = app.add_subcommand("gen", "generate a corpus circuit");
  gen->add_option("--family", family, "ryser|imm|power|random|bool_reach|const_chain")->required();
  gen->add_option("--n", spec.n, "matrix dimension (ryser, imm)");
  gen->add_option("--k", spec.k, "factors (imm) or squarings (power, const_chain)");
  gen->add_option("--vars", spec.vars, "variables (random)");
  gen->add_option("--size", spec.size, "gate budget (random)");
  gen->add_option("--max-degree", spec.max_degree, "formal degree cap (random)");
  gen->add_option("--nodes", spec.nodes, "graph vertices (bool_reach)");
  gen->add_option("--seed", spec.seed, "seed (random, bool_reach)");
  gen->add_option("-o", out_path, "output file");

  // stats
  std::string input, other;
  auto* stats = app.add_subcommand("stats", "print circuit or branching-program statistics");
  stats->add_option("file", input)->required();
  stats->add_flag("--json", json);

  // pass
  std::string pass_name;
  auto* pass = app.add_subcommand("pass", "run one transformation");
  pass->add_option("name", pass_name, "eliminate-sub|collapse-add|homogenize|to-weakly-skew|to-abp")
      ->required()
      ->check(CLI::IsMember({"eliminate-sub", "collapse-add", "homogenize", "to-weakly-skew", "to-abp"}));
  pass->add_option("file", input)->required();
  pass->add_option("-o", out_path, "output file");
  pass->add_option("--report", report_path, "JSON report file");
  pass->add_option("--mode", mode, "homogenize mode: vp|vp0");
  pass->add_flag("--json", json);

  // pipeline
  std::string target;
  auto* pipe = app.add_subcommand("pipeline", "run a full depth reduction");
  pipe->add_option("target", target, "depth4|depth2delta|polylog|boolean")
      ->required()
      ->check(CLI::IsMember({"depth4", "depth2delta", "polylog", "boolean"}));
  pipe->add_option("file", input)->required();
  pipe->add_option("-o", out_path, "output file");
  pipe->add_option("--report", report_path, "JSON report file");
  pipe->add_option("--mode", mode, "depth4 mode: circuit|formula");
  pipe->add_option("--delta", delta, "Delta for depth2delta and boolean");
  pipe->add_option("--verify", verify_mode, "exact|random|none");
  pipe->add_option("--trials", trials, "random verification trials");
  pipe->add_option("--seed", seed, "random verification seed");
  pipe->add_flag("--json", json);

  // verify
  auto* verify = app.add_subcommand("verify", "check two circuits compute the same polynomials");
  verify->add_option("a", input)->required();
  verify->add_option("b", other)->required();
  verify->add_option("--mode", mode, "exact|random");
  verify->add_option("--trials", trials, "random trials");
  verify->add_option("--seed", seed, "random seed");
  verify->add_flag("--json", json);

  // report
  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "aggregate JSON pass reports");
  report->add_option("files", report_files)->required();
  report->add_option("-o", out_path, "aggregated JSON output");
  report->add_flag("--json", json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      static const std::map<std::string, CorpusSpec::Family> families = {
          {"ryser", CorpusSpec::Family::Ryser},   {"imm", CorpusSpec::Family::Imm},
          {"power", CorpusSpec::Family::Power},   {"random", CorpusSpec::Family::Random},
          {"bool_reach", CorpusSpec::Family::BoolReach}, {"const_chain", CorpusSpec::Family::ConstChain}};
      auto it = families.find(family);
      if (it == families.end()) throw Error("unknown family '" + family + "'");
      spec.family = it->second;
      write_text(out_path, emit_circuit(gen_corpus(spec)));
      return kOk;
    }

    if (stats->parsed()) {
      Loaded l = load(input);
      if (l.abp) {
        AbpStats s = abp_stats(*l.abp);
        if (json) std::cout << to_json(s).dump(2) << "\n";
        else std::cout << "nodes " << s.size << "\nedges " << s.edges << "\ndepth " << s.depth << "\ntrimmed "
                       << (s.trimmed ? "yes" : "no") << "\n";
        return kOk;
      }
      CircuitStats s = circuit_stats(*l.circuit);
      if (json) std::cout << to_json(s).dump(2) << "\n";
      else std::cout << stats_text(s);
      return kOk;
    }

    if (pass->parsed()) {
      Circuit c = load_circuit(input);
      PassReport r;
      if (pass_name == "eliminate-sub") {
        Transformed t = eliminate_subtractions(binary(c));
        write_text(out_path, emit_circuit(t.circuit));
        r = std::move(t.report);
      } else if (pass_name == "collapse-add") {
        Transformed t = collapse_additions(c);
        write_text(out_path, emit_circuit(t.circuit));
        r = std::move(t.report);
      } else if (pass_name == "homogenize") {
        HomogenizeOptions opts;
        opts.cap = monomial_cap_from_env();
        if (mode == "vp0") opts.mode = HomogenizeMode::Vp0;
        else if (!mode.empty() && mode != "vp") throw Error("homogenize mode must be vp or vp0");
        Homogenized h = homogenize(binary(c), opts);
        write_text(out_path, emit_circuit(h.circuit));
        r = std::move(h.report);
      } else if (pass_name == "to-weakly-skew") {
        Transformed t = to_weakly_skew(binary(c));
        write_text(out_path, emit_circuit(t.circuit));
        r = std::move(t.report);
      } else {
        AbpResult a = circuit_to_abp(binary(c));
        write_text(out_path, emit_abp(a.abp));
        r = std::move(a.report);
      }
      return finish({r}, report_path, json);
    }

    if (pipe->parsed()) {
      VerifyConfig v = verify_config(verify_mode, trials, seed);
      Loaded l = load(input);
      Transformed t;
      if (target == "depth4" || target == "depth2delta") {
        if (mode.empty()) mode = "circuit";
        if (mode != "circuit" && mode != "formula") throw Error("depth4 mode must be circuit or formula");
        if (l.abp) {
          t = target == "depth4"
                  ? abp_to_depth4(*l.abp, mode == "formula" ? Depth4Mode::Formula : Depth4Mode::Circuit)
                  : abp_to_depth_2delta(*l.abp, delta);
          if (v.kind != VerifyConfig::Kind::None) {
            bool same = v.kind == VerifyConfig::Kind::Exact ? equiv_exact(t.circuit, *l.abp, v.cap)
                                                            : equiv_random(t.circuit, *l.abp, v.trials, v.seed).equivalent;
            t.report.bounds.push_back(check_eq("equivalent", same ? 1 : 0, 1));
          }
        } else if (target == "depth4") {
          PipelineConfig cfg;
          cfg.target = mode == "formula" ? Target::Depth4Formula : Target::Depth4Circuit;
          cfg.verify = v;
          t = reduce_to_depth4(binary(*l.circuit), cfg);
        } else {
          Circuit c = binary(*l.circuit);
          AbpResult a = circuit_to_abp(c);
          t = abp_to_depth_2delta(a.abp, delta);
          for (BoundCheck b : a.report.bounds) {
            b.name = "abp: " + b.name;
            t.report.bounds.push_back(std::move(b));
          }
          t.report.instance = c.name();
          if (v.kind == VerifyConfig::Kind::Exact) {
            t.report.bounds.push_back(check_eq("equivalent (exact)", equiv_exact(c, t.circuit, v.cap) ? 1 : 0, 1));
          } else if (v.kind == VerifyConfig::Kind::Random) {
            bool same = equiv_random(c, t.circuit, v.trials, v.seed).equivalent;
            t.report.bounds.push_back(check_eq("equivalent (random)", same ? 1 : 0, 1));
          }
        }
      } else {
        if (!l.circuit) throw Error(target + " needs a circuit input");
        t = target == "polylog" ? reduce_to_polylog(binary(*l.circuit), v) : reduce_boolean(*l.circuit, delta, v);
      }
      write_text(out_path, emit_circuit(t.circuit));
      return finish({t.report}, report_path, json);
    }

    if (verify->parsed()) {
      Loaded a = load(input);
      Loaded b = load(other);
      if (!a.circuit) std::swap(a, b);
      if (!a.circuit) throw Error("at least one side must be a circuit");
      bool same = false;
      nlohmann::json out;
      if (mode.empty() || mode == "exact") {
        std::size_t cap = monomial_cap_from_env();
        same = b.circuit ? equiv_exact(*a.circuit, *b.circuit, cap) : equiv_exact(*a.circuit, *b.abp, cap);
        out = {{"mode", "exact"}, {"equivalent", same}};
      } else if (mode == "random") {
        RandomVerdict rv = b.circuit ? equiv_random(*a.circuit, *b.circuit, trials, seed)
                                     : equiv_random(*a.circuit, *b.abp, trials, seed);
        same = rv.equivalent;
        out = {{"mode", "random"}, {"equivalent", same}, {"trials", rv.trials},
               {"log2_failure_bound", rv.log2_failure_bound}};
      } else {
        throw Error("verify mode must be exact or random");
      }
      if (json) std::cout << out.dump(2) << "\n";
      else std::cout << (same ? "equivalent" : "NOT equivalent") << "\n";
      return same ? kOk : kBoundFailure;
    }

    if (report->parsed()) {
      std::vector<PassReport> reports;
      for (const auto& f : report_files) {
        auto j = nlohmann::json::parse(read_file(f));
        if (j.contains("passes")) {
          for (const auto& p : j.at("passes")) reports.push_back(pass_report_from_json(p));
        } else {
          reports.push_back(pass_report_from_json(j));
        }
      }
      AggregateReport agg = bound_report(reports);
      if (!out_path.empty()) write_text(out_path, agg.json.dump(2) + "\n");
      if (json) std::cout << agg.json.dump(2) << "\n";
      else std::cout << agg.table;
      return agg.all_bounds_ok ? kOk : kBoundFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "chasm: " << e.what() << "\n";
    return kError;
  }
  return kOk;
}
