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

#include "chasm/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

#include "chasm/errors.hpp"

namespace chasm {

bool parse_bigint(const std::string& text, BigInt& out) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) return false;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') return false;
  }
  std::string digits = text[0] == '+' ? text.substr(1) : text;
  return out.set_str(digits, 10) == 0;
}

std::string_view kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Input: return "input";
    case GateKind::Const: return "const";
    case GateKind::Add: return "add";
    case GateKind::Sub: return "sub";
    case GateKind::Mul: return "mul";
  }
  return "?";
}

bool Gate::is_ordinary_add() const {
  return kind == GateKind::Add && children.size() == 2 && weights.size() == 2 && weights[0] == 1 &&
         weights[1] == 1;
}

Circuit::Circuit(std::string name) : name_(std::move(name)) {}

std::size_t Circuit::index_of(GateId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown gate id " + std::to_string(id));
  return it->second;
}

GateId Circuit::input(std::string var) {
  Gate g;
  g.id = next_id_;
  g.kind = GateKind::Input;
  g.var = std::move(var);
  return push(std::move(g));
}

GateId Circuit::constant(BigInt value) {
  Gate g;
  g.id = next_id_;
  g.kind = GateKind::Const;
  g.value = std::move(value);
  return push(std::move(g));
}

GateId Circuit::add(std::vector<GateId> children, std::vector<BigInt> weights) {
  if (weights.empty()) weights.assign(children.size(), BigInt(1));
  Gate g;
  g.id = next_id_;
  g.kind = GateKind::Add;
  g.children = std::move(children);
  g.weights = std::move(weights);
  return push(std::move(g));
}

GateId Circuit::sub(GateId left, GateId right) {
  Gate g;
  g.id = next_id_;
  g.kind = GateKind::Sub;
  g.children = {left, right};
  return push(std::move(g));
}

GateId Circuit::mul(std::vector<GateId> children) {
  Gate g;
  g.id = next_id_;
  g.kind = GateKind::Mul;
  g.children = std::move(children);
  return push(std::move(g));
}

GateId Circuit::push(Gate gate) {
  if (gate.id == 0) throw Error("gate ids must be positive");
  if (index_.count(gate.id)) throw Error("duplicate gate id " + std::to_string(gate.id));
  switch (gate.kind) {
    case GateKind::Input:
      if (gate.var.empty()) throw Error("input gate without a variable name");
      break;
    case GateKind::Const:
      break;
    case GateKind::Add:
      if (gate.children.empty()) throw Error("add gate " + std::to_string(gate.id) + " has no inputs");
      if (gate.weights.size() != gate.children.size())
        throw Error("add gate " + std::to_string(gate.id) + " weight count mismatch");
      break;
    case GateKind::Sub:
      if (gate.children.size() != 2) throw Error("sub gate " + std::to_string(gate.id) + " needs 2 inputs");
      break;
    case GateKind::Mul:
      if (gate.children.size() < 2) throw Error("mul gate " + std::to_string(gate.id) + " needs >= 2 inputs");
      break;
  }
  for (GateId child : gate.children) {
    if (!index_.count(child)) {
      throw Error("gate " + std::to_string(gate.id) + " uses gate " + std::to_string(child) +
                  " before its definition");
    }
  }
  GateId id = gate.id;
  index_.emplace(id, gates_.size());
  gates_.push_back(std::move(gate));
  next_id_ = std::max<GateId>(next_id_, id + 1);
  return id;
}

void Circuit::mark_output(GateId id) {
  if (!index_.count(id)) throw Error("output refers to undefined gate " + std::to_string(id));
  outputs_.push_back(id);
}

std::vector<std::string> Circuit::variables() const {
  std::set<std::string> vars;
  for (const Gate& g : gates_) {
    if (g.kind == GateKind::Input) vars.insert(g.var);
  }
  return {vars.begin(), vars.end()};
}

Topology topology(const Circuit& c) {
  Topology t;
  const auto& gates = c.gates();
  t.children.resize(gates.size());
  t.consumers.resize(gates.size());
  t.is_output.assign(gates.size(), false);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (GateId child : gates[i].children) {
      std::size_t j = c.index_of(child);
      t.children[i].push_back(j);
      t.consumers[j].push_back(i);
    }
  }
  for (GateId out : c.outputs()) {
    std::size_t j = c.index_of(out);
    t.outputs.push_back(j);
    t.is_output[j] = true;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_id(const std::string& tok, GateId& out) {
  if (tok.empty() || tok.size() > 10) return false;
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  if (v == 0 || v > std::numeric_limits<GateId>::max()) return false;
  out = static_cast<GateId>(v);
  return true;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (toks[0] != "circuit" || toks.size() != 2) throw ParseError(line_no, "expected 'circuit <name>'");
      c.set_name(toks[1]);
      have_header = true;
      continue;
    }
    if (toks[0] == "output") {
      GateId id;
      if (toks.size() != 2 || !parse_id(toks[1], id)) throw ParseError(line_no, "expected 'output <id>'");
      if (!c.contains(id)) throw ParseError(line_no, "output refers to undefined gate " + toks[1]);
      c.mark_output(id);
      continue;
    }
    if (toks[0] != "gate" || toks.size() < 3) throw ParseError(line_no, "expected 'gate <id> <kind> ...'");
    Gate g;
    if (!parse_id(toks[1], g.id)) throw ParseError(line_no, "bad gate id '" + toks[1] + "'");
    if (c.contains(g.id)) throw ParseError(line_no, "duplicate gate id " + toks[1]);
    const std::string& kind = toks[2];
    auto child_id = [&](const std::string& tok) {
      GateId id;
      if (!parse_id(tok, id)) throw ParseError(line_no, "bad child id '" + tok + "'");
      if (!c.contains(id)) {
        throw ParseError(line_no, "use-before-definition: gate " + toks[1] + " references gate " + tok);
      }
      return id;
    };
    if (kind == "input") {
      if (toks.size() != 4) throw ParseError(line_no, "expected 'gate <id> input <var>'");
      g.kind = GateKind::Input;
      g.var = toks[3];
    } else if (kind == "const") {
      if (toks.size() != 4 || !parse_bigint(toks[3], g.value)) {
        throw ParseError(line_no, "expected 'gate <id> const <integer>'");
      }
      g.kind = GateKind::Const;
    } else if (kind == "add") {
      if (toks.size() < 4) throw ParseError(line_no, "add needs at least one input");
      g.kind = GateKind::Add;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        const std::string& tok = toks[i];
        auto colon = tok.find(':');
        BigInt w = 1;
        if (colon != std::string::npos && !parse_bigint(tok.substr(colon + 1), w)) {
          throw ParseError(line_no, "bad weight in '" + tok + "'");
        }
        g.children.push_back(child_id(tok.substr(0, colon)));
        g.weights.push_back(w);
      }
    } else if (kind == "sub") {
      if (toks.size() != 5) throw ParseError(line_no, "sub needs exactly two inputs");
      g.kind = GateKind::Sub;
      g.children = {child_id(toks[3]), child_id(toks[4])};
    } else if (kind == "mul") {
      if (toks.size() < 5) throw ParseError(line_no, "mul arity must be at least 2");
      g.kind = GateKind::Mul;
      for (std::size_t i = 3; i < toks.size(); ++i) g.children.push_back(child_id(toks[i]));
    } else {
      throw ParseError(line_no, "unknown gate kind '" + kind + "'");
    }
    c.push(std::move(g));
  }
  if (!have_header) throw ParseError(line_no, "missing 'circuit <name>' header");
  if (c.outputs().empty()) throw ParseError(line_no, "circuit has no output");
  return c;
}

std::string emit_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "circuit " << c.name() << '\n';
  for (const Gate& g : c.gates()) {
    os << "gate " << g.id << ' ' << kind_name(g.kind);
    switch (g.kind) {
      case GateKind::Input: os << ' ' << g.var; break;
      case GateKind::Const: os << ' ' << to_string(g.value); break;
      case GateKind::Add:
        for (std::size_t i = 0; i < g.children.size(); ++i) {
          os << ' ' << g.children[i];
          if (g.weights[i] != 1) os << ':' << to_string(g.weights[i]);
        }
        break;
      case GateKind::Sub:
      case GateKind::Mul:
        for (GateId ch : g.children) os << ' ' << ch;
        break;
    }
    os << '\n';
  }
  for (GateId out : c.outputs()) os << "output " << out << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Metrics

std::vector<std::uint64_t> gate_degrees(const Circuit& c) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto& gates = c.gates();
  std::vector<std::uint64_t> deg(gates.size(), 1);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.is_leaf()) continue;
    std::uint64_t d = 0;
    for (GateId ch : g.children) {
      std::uint64_t cd = deg[c.index_of(ch)];
      if (g.kind == GateKind::Mul) {
        d = (kMax - d < cd) ? kMax : d + cd;
      } else {
        d = std::max(d, cd);
      }
    }
    deg[i] = d;
  }
  return deg;
}

std::unordered_map<GateId, std::uint64_t> formal_degree_map(const Circuit& c) {
  auto deg = gate_degrees(c);
  std::unordered_map<GateId, std::uint64_t> out;
  for (std::size_t i = 0; i < deg.size(); ++i) out.emplace(c.gates()[i].id, deg[i]);
  return out;
}

std::uint64_t formal_degree(const Circuit& c) {
  auto deg = gate_degrees(c);
  std::uint64_t d = 0;
  for (GateId out : c.outputs()) d = std::max(d, deg[c.index_of(out)]);
  return d;
}

std::vector<std::uint64_t> gate_depths(const Circuit& c) {
  const auto& gates = c.gates();
  std::vector<std::uint64_t> depth(gates.size(), 0);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (GateId ch : gates[i].children) depth[i] = std::max(depth[i], depth[c.index_of(ch)] + 1);
  }
  return depth;
}

std::uint64_t circuit_depth(const Circuit& c) {
  auto depth = gate_depths(c);
  std::uint64_t d = 0;
  for (GateId out : c.outputs()) d = std::max(d, depth[c.index_of(out)]);
  return d;
}

CircuitStats circuit_stats(const Circuit& c) {
  CircuitStats s;
  s.size = c.size();
  s.depth = circuit_depth(c);
  s.formal_degree = formal_degree(c);
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Input: ++s.num_inputs; break;
      case GateKind::Const: {
        ++s.num_consts;
        BigInt a = abs(g.value);
        if (a > s.max_abs_constant) s.max_abs_constant = a;
        break;
      }
      case GateKind::Add: {
        ++s.num_adds;
        s.max_add_fanin = std::max(s.max_add_fanin, g.children.size());
        BigInt total = 0;
        for (const BigInt& w : g.weights) total += abs(w);
        if (total > s.max_add_total_weight) s.max_add_total_weight = total;
        break;
      }
      case GateKind::Sub:
        ++s.num_subs;
        s.max_add_fanin = std::max<std::size_t>(s.max_add_fanin, 2);
        break;
      case GateKind::Mul:
        ++s.num_muls;
        s.max_mul_fanin = std::max(s.max_mul_fanin, g.children.size());
        break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shape predicates

std::string_view shape_name(ShapeSpec spec) {
  switch (spec) {
    case ShapeSpec::OrdinaryAdditionsOnly: return "OrdinaryAdditionsOnly";
    case ShapeSpec::BinaryMultiplicationsOnly: return "BinaryMultiplicationsOnly";
    case ShapeSpec::InputFanoutAtMostOne: return "InputFanoutAtMostOne";
    case ShapeSpec::ConstantFree: return "ConstantFree";
    case ShapeSpec::WeaklySkew: return "WeaklySkew";
    case ShapeSpec::Skew: return "Skew";
    case ShapeSpec::AddFeedsOnlyMul: return "AddFeedsOnlyMul";
    case ShapeSpec::Depth4SigmaPiSigmaPi: return "Depth4SigmaPiSigmaPi";
    case ShapeSpec::SemiUnbounded: return "SemiUnbounded";
  }
  return "?";
}

namespace {

// True when the sub-DAG below `child` reaches the rest of the circuit only
// through the single edge child -> mul. Counting argument: the ancestor set A
// of `child` is closed under children, so every edge leaving a node of A is
// either internal (counted once among children of A) or external.
bool is_independent(const Topology& t, std::size_t mul, std::size_t child, std::vector<int>& mark,
                    int stamp, std::vector<std::size_t>& stack) {
  if (t.consumers[child].size() != 1 || t.consumers[child][0] != mul) return false;
  std::size_t out_edges = 0;
  std::size_t in_edges = 0;
  stack.clear();
  stack.push_back(child);
  mark[child] = stamp;
  while (!stack.empty()) {
    std::size_t g = stack.back();
    stack.pop_back();
    if (t.is_output[g]) return false;
    out_edges += t.consumers[g].size();
    in_edges += t.children[g].size();
    for (std::size_t ch : t.children[g]) {
      if (mark[ch] != stamp) {
        mark[ch] = stamp;
        stack.push_back(ch);
      }
    }
  }
  return out_edges == in_edges + 1;
}

}  // namespace

std::vector<std::optional<int>> independent_children(const Circuit& c) {
  Topology t = topology(c);
  const auto& gates = c.gates();
  std::vector<std::optional<int>> out(gates.size());
  std::vector<int> mark(gates.size(), 0);
  std::vector<std::size_t> stack;
  int stamp = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind != GateKind::Mul || t.children[i].size() != 2) continue;
    if (t.children[i][0] == t.children[i][1]) continue;
    for (int slot : {1, 0}) {
      if (is_independent(t, i, t.children[i][slot], mark, ++stamp, stack)) {
        out[i] = slot;
        break;
      }
    }
  }
  return out;
}

ShapeVerdict check_shape(const Circuit& c, ShapeSpec spec) {
  ShapeVerdict v{spec, true, std::nullopt, {}};
  auto fail = [&](const Gate& g, std::string reason) {
    v.ok = false;
    v.witness = g.id;
    v.reason = std::move(reason);
    return v;
  };
  const auto& gates = c.gates();
  switch (spec) {
    case ShapeSpec::OrdinaryAdditionsOnly:
      for (const Gate& g : gates) {
        if (g.kind == GateKind::Sub) return fail(g, "subtraction gate");
        if (g.kind == GateKind::Add && !g.is_ordinary_add()) return fail(g, "weighted or non-binary addition");
      }
      return v;
    case ShapeSpec::BinaryMultiplicationsOnly:
      for (const Gate& g : gates) {
        if (g.kind == GateKind::Mul && g.children.size() != 2) return fail(g, "non-binary multiplication");
      }
      return v;
    case ShapeSpec::InputFanoutAtMostOne: {
      Topology t = topology(c);
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].is_leaf() && t.consumers[i].size() > 1) return fail(gates[i], "leaf fan-out > 1");
      }
      return v;
    }
    case ShapeSpec::ConstantFree:
      for (const Gate& g : gates) {
        if (g.kind == GateKind::Const && abs(g.value) > 1) return fail(g, "constant outside {-1,0,1}");
      }
      return v;
    case ShapeSpec::WeaklySkew: {
      auto indep = independent_children(c);
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].kind != GateKind::Mul) continue;
        if (gates[i].children.size() != 2) return fail(gates[i], "non-binary multiplication");
        if (!indep[i]) return fail(gates[i], "multiplication gate is not disjoint");
      }
      return v;
    }
    case ShapeSpec::Skew:
      for (const Gate& g : gates) {
        if (g.kind != GateKind::Mul) continue;
        if (g.children.size() != 2) return fail(g, "non-binary multiplication");
        if (!c.gate(g.children[0]).is_leaf() && !c.gate(g.children[1]).is_leaf()) {
          return fail(g, "no input child");
        }
      }
      return v;
    case ShapeSpec::AddFeedsOnlyMul:
      for (const Gate& g : gates) {
        if (!g.is_additive()) continue;
        for (GateId ch : g.children) {
          if (c.gate(ch).is_additive()) return fail(g, "addition fed by gate " + std::to_string(ch));
        }
      }
      return v;
    case ShapeSpec::Depth4SigmaPiSigmaPi: {
      // Lowest slot of the pattern (1=Π, 2=Σ, 3=Π, 4=Σ, reading upward) a
      // gate can occupy; leaves sit at 0 and any layer may be skipped.
      std::vector<int> level(gates.size(), 0);
      for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        if (g.is_leaf()) continue;
        if (g.kind == GateKind::Sub) return fail(g, "subtraction gate");
        int below = 0;
        for (GateId ch : g.children) below = std::max(below, level[c.index_of(ch)]);
        int lv = below + 1;
        bool want_odd = g.kind == GateKind::Mul;
        if ((lv % 2 == 1) != want_odd) ++lv;
        level[i] = lv;
      }
      for (GateId out : c.outputs()) {
        if (level[c.index_of(out)] > 4) return fail(c.gate(out), "output is not a ΣΠΣΠ expression");
      }
      return v;
    }
    case ShapeSpec::SemiUnbounded:
      for (const Gate& g : gates) {
        if (g.kind == GateKind::Sub) return fail(g, "subtraction gate");
        if (g.kind == GateKind::Mul && g.children.size() != 2) return fail(g, "AND gate with fan-in != 2");
        if (g.kind == GateKind::Const && g.value != 0 && g.value != 1) return fail(g, "constant outside {0,1}");
        if (g.kind == GateKind::Add) {
          for (const BigInt& w : g.weights) {
            if (w != 1) return fail(g, "weighted OR gate");
          }
        }
      }
      return v;
  }
  return v;
}

std::vector<ShapeVerdict> check_shapes(const Circuit& c, const std::vector<ShapeSpec>& specs) {
  std::vector<ShapeVerdict> out;
  out.reserve(specs.size());
  for (ShapeSpec s : specs) out.push_back(check_shape(c, s));
  return out;
}

// ---------------------------------------------------------------------------
// Rewrites

namespace {

GateId copy_leaf(Circuit& out, const Gate& g) {
  return g.kind == GateKind::Input ? out.input(g.var) : out.constant(g.value);
}

}  // namespace

Circuit normalize_leaf_fanout(const Circuit& c) {
  if (check_shape(c, ShapeSpec::InputFanoutAtMostOne).ok) return c;
  Circuit out(c.name());
  std::unordered_map<GateId, GateId> remap;
  std::unordered_map<GateId, bool> used;
  for (const Gate& g : c.gates()) {
    if (g.is_leaf()) {
      remap[g.id] = copy_leaf(out, g);
      continue;
    }
    std::vector<GateId> kids;
    for (GateId ch : g.children) {
      const Gate& cg = c.gate(ch);
      if (cg.is_leaf() && used[ch]) {
        kids.push_back(copy_leaf(out, cg));
      } else {
        used[ch] = true;
        kids.push_back(remap.at(ch));
      }
    }
    Gate ng;
    ng.id = out.next_id();
    ng.kind = g.kind;
    ng.children = std::move(kids);
    ng.weights = g.weights;
    remap[g.id] = out.push(std::move(ng));
  }
  for (GateId o : c.outputs()) out.mark_output(remap.at(o));
  return out;
}

namespace {

// m * g for m >= 1 via most-significant-bit-first doubling.
GateId scale_by_doubling(Circuit& out, GateId g, const BigInt& m) {
  std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
  GateId acc = g;
  for (std::size_t b = bits - 1; b-- > 0;) {
    acc = out.add({acc, acc});
    if (mpz_tstbit(m.get_mpz_t(), b)) acc = out.add({acc, g});
  }
  return acc;
}

GateId sum_chain(Circuit& out, const std::vector<GateId>& terms) {
  GateId acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = out.add({acc, terms[i]});
  return acc;
}

}  // namespace

Circuit lower_to_binary(const Circuit& c) {
  Circuit out(c.name());
  std::unordered_map<GateId, GateId> remap;
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Input:
      case GateKind::Const:
        remap[g.id] = copy_leaf(out, g);
        break;
      case GateKind::Sub:
        remap[g.id] = out.sub(remap.at(g.children[0]), remap.at(g.children[1]));
        break;
      case GateKind::Mul: {
        GateId acc = remap.at(g.children[0]);
        for (std::size_t i = 1; i < g.children.size(); ++i) acc = out.mul(acc, remap.at(g.children[i]));
        remap[g.id] = acc;
        break;
      }
      case GateKind::Add: {
        std::vector<GateId> pos, neg;
        for (std::size_t i = 0; i < g.children.size(); ++i) {
          const BigInt& w = g.weights[i];
          if (w == 0) continue;
          GateId term = scale_by_doubling(out, remap.at(g.children[i]), abs(w));
          (w > 0 ? pos : neg).push_back(term);
        }
        if (pos.empty() && neg.empty()) {
          remap[g.id] = out.constant(0);
        } else if (neg.empty()) {
          remap[g.id] = sum_chain(out, pos);
        } else if (pos.empty()) {
          GateId zero = out.constant(0);
          remap[g.id] = out.sub(zero, sum_chain(out, neg));
        } else {
          GateId p = sum_chain(out, pos);
          remap[g.id] = out.sub(p, sum_chain(out, neg));
        }
        break;
      }
    }
  }
  for (GateId o : c.outputs()) out.mark_output(remap.at(o));
  return out;
}

Circuit prune_dead(const Circuit& c) {
  Topology t = topology(c);
  std::vector<bool> live(c.size(), false);
  std::vector<std::size_t> stack(t.outputs.begin(), t.outputs.end());
  for (std::size_t o : stack) live[o] = true;
  while (!stack.empty()) {
    std::size_t g = stack.back();
    stack.pop_back();
    for (std::size_t ch : t.children[g]) {
      if (!live[ch]) {
        live[ch] = true;
        stack.push_back(ch);
      }
    }
  }
  Circuit out(c.name());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (live[i]) out.push(c.gates()[i]);
  }
  for (GateId o : c.outputs()) out.mark_output(o);
  return out;
}

}  // namespace chasm
