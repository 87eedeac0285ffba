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

#include "chasm/abp.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "chasm/errors.hpp"

namespace chasm {

Abp::Abp(std::string name, NodeId nodes) : name_(std::move(name)), nodes_(nodes) {
  if (nodes < 2) throw Error("a branching program needs at least a source and a sink");
}

Abp Abp::zero(std::string name) { return Abp(std::move(name), 2); }

void Abp::add_edge(NodeId from, NodeId to, Label label) {
  if (from < 1 || to > nodes_ || from >= to) {
    throw Error("edge " + std::to_string(from) + "->" + std::to_string(to) +
                " violates the topological numbering");
  }
  edges_.push_back({from, to, std::move(label)});
}

std::vector<std::string> Abp::variables() const {
  std::set<std::string> vars;
  for (const auto& e : edges_) {
    if (e.label.is_var()) vars.insert(e.label.var);
  }
  return {vars.begin(), vars.end()};
}

std::vector<std::int64_t> node_depths(const Abp& g) {
  std::vector<std::vector<const AbpEdge*>> in(g.nodes() + 1);
  for (const auto& e : g.edges()) in[e.to].push_back(&e);
  std::vector<std::int64_t> depth(g.nodes(), -1);
  depth[0] = 0;
  for (NodeId v = 2; v <= g.nodes(); ++v) {
    for (const AbpEdge* e : in[v]) {
      if (depth[e->from - 1] >= 0) depth[v - 1] = std::max(depth[v - 1], depth[e->from - 1] + 1);
    }
  }
  return depth;
}

namespace {

std::vector<bool> on_st_path(const Abp& g) {
  std::vector<bool> fwd(g.nodes() + 1, false), bwd(g.nodes() + 1, false);
  fwd[1] = true;
  bwd[g.nodes()] = true;
  // Edges go forward, so node order is a topological order.
  std::vector<std::vector<NodeId>> out(g.nodes() + 1), in(g.nodes() + 1);
  for (const auto& e : g.edges()) {
    out[e.from].push_back(e.to);
    in[e.to].push_back(e.from);
  }
  for (NodeId v = 1; v <= g.nodes(); ++v) {
    if (!fwd[v]) continue;
    for (NodeId w : out[v]) fwd[w] = true;
  }
  for (NodeId v = g.nodes(); v >= 1; --v) {
    if (!bwd[v]) continue;
    for (NodeId u : in[v]) bwd[u] = true;
  }
  std::vector<bool> keep(g.nodes() + 1, false);
  for (NodeId v = 1; v <= g.nodes(); ++v) keep[v] = fwd[v] && bwd[v];
  return keep;
}

}  // namespace

AbpStats abp_stats(const Abp& g) {
  AbpStats s;
  s.size = g.nodes();
  s.edges = g.edges().size();
  auto depth = node_depths(g);
  s.depth = depth.back() > 0 ? static_cast<std::uint64_t>(depth.back()) : 0;
  auto keep = on_st_path(g);
  // The designated zero program counts as trimmed.
  s.trimmed = (g.nodes() == 2 && g.edges().empty()) ||
              std::all_of(keep.begin() + 1, keep.end(), [](bool b) { return b; });
  return s;
}

Abp trim(const Abp& g) {
  auto keep = on_st_path(g);
  if (!keep[1]) return Abp::zero(g.name());
  std::vector<NodeId> renum(g.nodes() + 1, 0);
  NodeId next = 0;
  for (NodeId v = 1; v <= g.nodes(); ++v) {
    if (keep[v]) renum[v] = ++next;
  }
  Abp out(g.name(), next);
  for (const auto& e : g.edges()) {
    if (keep[e.from] && keep[e.to]) out.add_edge(renum[e.from], renum[e.to], e.label);
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_node(const std::string& tok, NodeId& out) {
  if (tok.empty() || tok.size() > 9) return false;
  for (char ch : tok) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  out = static_cast<NodeId>(std::stoul(tok));
  return true;
}

}  // namespace

Abp parse_abp(std::string_view text) {
  Abp g;
  bool have_header = false;
  std::size_t line_no = 0;
  std::istringstream is{std::string(text)};
  std::string raw;
  while (std::getline(is, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    if (!have_header) {
      NodeId m;
      if (toks.size() != 4 || toks[0] != "abp" || toks[2] != "nodes" || !parse_node(toks[3], m) || m < 2) {
        throw ParseError(line_no, "expected 'abp <name> nodes <m>' with m >= 2");
      }
      g = Abp(toks[1], m);
      have_header = true;
      continue;
    }
    NodeId u, v;
    if (toks.size() != 5 || toks[0] != "edge" || !parse_node(toks[1], u) || !parse_node(toks[2], v)) {
      throw ParseError(line_no, "expected 'edge <u> <v> var|const <label>'");
    }
    Label label;
    if (toks[3] == "var") {
      label = Label::variable(toks[4]);
    } else if (toks[3] == "const") {
      BigInt value;
      if (!parse_bigint(toks[4], value)) throw ParseError(line_no, "bad constant '" + toks[4] + "'");
      label = Label::constant(value);
    } else {
      throw ParseError(line_no, "edge label kind must be 'var' or 'const'");
    }
    try {
      g.add_edge(u, v, std::move(label));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'abp <name> nodes <m>' header");
  return g;
}

std::string emit_abp(const Abp& g) {
  std::ostringstream os;
  os << "abp " << g.name() << " nodes " << g.nodes() << '\n';
  for (const auto& e : g.edges()) {
    os << "edge " << e.from << ' ' << e.to << ' ';
    if (e.label.is_var()) {
      os << "var " << e.label.var;
    } else {
      os << "const " << to_string(e.label.value);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

void place(LabeledMatrix& m, const AbpEdge& e) {
  MatrixEntry& cell = m.at(e.from - 1, e.to - 1);
  if (cell.is_zero()) {
    if (e.label.is_var()) {
      cell = {MatrixEntry::Kind::Var, e.label.var, 0};
    } else {
      cell = {MatrixEntry::Kind::Const, {}, e.label.value};
    }
    return;
  }
  if (cell.kind == MatrixEntry::Kind::Const && !e.label.is_var()) {
    cell.value += e.label.value;
    return;
  }
  throw Error("parallel edges " + std::to_string(e.from) + "->" + std::to_string(e.to) +
              " cannot share one matrix entry");
}

}  // namespace

LabeledMatrix abp_to_matrix(const Abp& g) {
  if (!abp_stats(g).trimmed) throw NotTrimmed("branching program '" + g.name() + "' is not trimmed");
  LabeledMatrix m(g.nodes());
  for (const auto& e : g.edges()) place(m, e);
  m.at(g.nodes() - 1, g.nodes() - 1) = {MatrixEntry::Kind::One, {}, 0};
  return m;
}

LabeledMatrix abp_to_matrix_with_identity(const Abp& g) {
  LabeledMatrix m(g.nodes());
  for (const auto& e : g.edges()) place(m, e);
  for (std::size_t i = 0; i < g.nodes(); ++i) m.at(i, i) = {MatrixEntry::Kind::One, {}, 0};
  return m;
}

}  // namespace chasm
