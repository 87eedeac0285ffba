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

#include "chasm/depth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>

#include "chasm/errors.hpp"
#include "chasm/semiring.hpp"

namespace chasm {

std::uint64_t integer_root_ceil(std::uint64_t x, unsigned k) {
  if (x <= 1) return 1;
  BigInt r;
  mpz_root(r.get_mpz_t(), big(x).get_mpz_t(), k);
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), r.get_mpz_t(), k);
  if (p < big(x)) r += 1;
  return r.get_ui();
}

std::uint64_t ceil_log2(std::uint64_t x) {
  std::uint64_t k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

namespace {

// t^{log2(2d)} with upward rounding.
UpReal tows_bound(std::size_t t, std::uint64_t d) {
  UpReal lt = UpReal::log2(UpReal(big(t)));
  UpReal ld = UpReal::log2(UpReal(big(2 * d)));
  return UpReal::exp2(lt * ld);
}

BoundCheck flag(std::string name, bool ok) { return check_eq(std::move(name), ok ? 1 : 0, 1); }

BigInt max_const_label(const Abp& g) {
  BigInt m = 0;
  for (const auto& e : g.edges()) {
    if (!e.label.is_var()) m = std::max<BigInt>(m, abs(e.label.value));
  }
  return m;
}

void append(PassReport& dst, const PassReport& src, const std::string& prefix) {
  for (BoundCheck b : src.bounds) {
    b.name = prefix + ": " + b.name;
    dst.bounds.push_back(std::move(b));
  }
}

std::optional<BoundCheck> verify_equivalence(const Circuit& a, const Circuit& b, const VerifyConfig& v,
                                             PassReport& report) {
  switch (v.kind) {
    case VerifyConfig::Kind::None:
      return std::nullopt;
    case VerifyConfig::Kind::Exact:
      try {
        return flag("equivalent (exact)", equiv_exact(a, b, v.cap));
      } catch (const CapExceeded&) {
        report.note("verify", "monomial cap exceeded; fell back to random evaluation");
      }
      [[fallthrough]];
    case VerifyConfig::Kind::Random: {
      auto verdict = equiv_random(a, b, v.trials, v.seed);
      return flag("equivalent (random, " + std::to_string(verdict.trials) + " trials)", verdict.equivalent);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

class Privatizer {
 public:
  explicit Privatizer(const Circuit& in) : in_(in), topo_(topology(in)), deg_(gate_degrees(in)), out_(in.name()) {
    cone_.resize(in.size());
    std::vector<std::size_t> mark(in.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < in.size(); ++i) {
      std::size_t count = 0;
      stack.assign(1, i);
      mark[i] = i + 1;
      while (!stack.empty()) {
        std::size_t g = stack.back();
        stack.pop_back();
        ++count;
        for (std::size_t ch : topo_.children[g]) {
          if (mark[ch] != i + 1) {
            mark[ch] = i + 1;
            stack.push_back(ch);
          }
        }
      }
      cone_[i] = count;
    }
  }

  Circuit run() {
    Memo shared;
    for (std::size_t o : topo_.outputs) out_.mark_output(build(o, shared));
    return std::move(out_);
  }

 private:
  using Memo = std::unordered_map<std::size_t, GateId>;

  // Slot of the child that gets a private copy.
  int private_slot(std::size_t mul) const {
    std::size_t a = topo_.children[mul][0];
    std::size_t b = topo_.children[mul][1];
    if (deg_[a] != deg_[b]) return deg_[a] < deg_[b] ? 0 : 1;
    if (cone_[a] != cone_[b]) return cone_[a] < cone_[b] ? 0 : 1;
    return in_.gates()[a].id <= in_.gates()[b].id ? 0 : 1;
  }

  GateId build(std::size_t i, Memo& memo) {
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    const Gate& g = in_.gates()[i];
    GateId made = 0;
    switch (g.kind) {
      case GateKind::Input: made = out_.input(g.var); break;
      case GateKind::Const: made = out_.constant(g.value); break;
      case GateKind::Add: {
        std::vector<GateId> kids;
        for (std::size_t ch : topo_.children[i]) kids.push_back(build(ch, memo));
        made = out_.add(std::move(kids), g.weights);
        break;
      }
      case GateKind::Sub: {
        GateId l = build(topo_.children[i][0], memo);
        GateId r = build(topo_.children[i][1], memo);
        made = out_.sub(l, r);
        break;
      }
      case GateKind::Mul: {
        int slot = private_slot(i);
        GateId kids[2];
        kids[1 - slot] = build(topo_.children[i][1 - slot], memo);
        Memo fresh;
        kids[slot] = build(topo_.children[i][slot], fresh);
        made = out_.mul(kids[0], kids[1]);
        break;
      }
    }
    memo.emplace(i, made);
    return made;
  }

  const Circuit& in_;
  Topology topo_;
  std::vector<std::uint64_t> deg_;
  std::vector<std::size_t> cone_;
  Circuit out_;
};

// Iterative form of the induction: every gate gets the node t_g, except a
// product, which reuses the node of its independent child built on top of
// the shared child's node.
struct AbpConstruction {
  std::vector<AbpEdge> edges;
  NodeId nodes = 1;
  std::vector<NodeId> outputs;
};

AbpConstruction build_abp(const Circuit& c) {
  auto shape = check_shape(c, ShapeSpec::WeaklySkew);
  if (!shape.ok) {
    throw NotWeaklySkew("gate " + std::to_string(*shape.witness) + ": " + shape.reason);
  }
  auto feeds = check_shape(c, ShapeSpec::AddFeedsOnlyMul);
  if (!feeds.ok) {
    throw PreconditionViolated("addition input condition fails at gate " + std::to_string(*feeds.witness));
  }
  Topology t = topology(c);
  auto indep = independent_children(c);
  const auto& gates = c.gates();
  AbpConstruction r;
  std::vector<NodeId> node(gates.size(), 0);
  auto fresh = [&] { return ++r.nodes; };

  std::function<NodeId(std::size_t, NodeId)> build = [&](std::size_t i, NodeId s) -> NodeId {
    if (node[i] != 0) return node[i];
    const Gate& g = gates[i];
    NodeId v = 0;
    switch (g.kind) {
      case GateKind::Input:
        v = fresh();
        r.edges.push_back({s, v, Label::variable(g.var)});
        break;
      case GateKind::Const:
        v = fresh();
        r.edges.push_back({s, v, Label::constant(g.value)});
        break;
      case GateKind::Add:
      case GateKind::Sub: {
        std::vector<NodeId> from;
        for (std::size_t ch : t.children[i]) from.push_back(build(ch, s));
        v = fresh();
        for (std::size_t k = 0; k < from.size(); ++k) {
          BigInt w = g.kind == GateKind::Add ? g.weights[k] : BigInt(k == 0 ? 1 : -1);
          if (w != 0) r.edges.push_back({from[k], v, Label::constant(w)});
        }
        break;
      }
      case GateKind::Mul: {
        int slot = *indep[i];
        NodeId tb = build(t.children[i][1 - slot], s);
        v = build(t.children[i][slot], tb);
        break;
      }
    }
    node[i] = v;
    return v;
  };
  for (std::size_t o : t.outputs) r.outputs.push_back(build(o, 1));
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

Transformed to_weakly_skew(const Circuit& c) {
  if (!check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok) {
    throw PreconditionViolated("to_weakly_skew: non-binary multiplication");
  }
  const Circuit* src = &c;
  Circuit collapsed;
  if (!check_shape(c, ShapeSpec::AddFeedsOnlyMul).ok) {
    collapsed = collapse_additions(c).circuit;
    src = &collapsed;
  }
  Transformed r{Privatizer(*src).run(), {}};
  r.report.pass = "to_weakly_skew";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output = circuit_stats(r.circuit);
  const auto& in = *r.report.input;
  const auto& os = *r.report.output;
  r.report.bounds.push_back(flag("weakly skew", check_shape(r.circuit, ShapeSpec::WeaklySkew).ok));
  r.report.bounds.push_back(
      flag("additions feed only multiplications", check_shape(r.circuit, ShapeSpec::AddFeedsOnlyMul).ok));
  r.report.bounds.push_back(check_eq("formal degree preserved", big(os.formal_degree), big(in.formal_degree)));
  r.report.bounds.push_back(check_le("size <= t^log2(2d)", big(os.size), tows_bound(in.size, in.formal_degree)));
  if (ordinary_additive(c)) {
    r.report.bounds.push_back(check_le("addition total weight <= 2^t", os.max_add_total_weight, pow2(in.size)));
  }
  return r;
}

MultiAbpResult weakly_skew_to_multi_abp(const Circuit& c) {
  AbpConstruction built = build_abp(c);
  Abp g(c.name(), std::max<NodeId>(built.nodes, 2));
  for (auto& e : built.edges) g.add_edge(e.from, e.to, std::move(e.label));
  MultiAbpResult r{{std::move(g), built.outputs}, {}};
  r.report.pass = "weakly_skew_to_abp";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output_abp = abp_stats(r.abp.abp);
  auto depths = node_depths(r.abp.abp);
  std::int64_t deepest = 0;
  for (NodeId o : r.abp.outputs) deepest = std::max(deepest, depths[o - 1]);
  const auto m = r.report.input->size;
  const auto d = r.report.input->formal_degree;
  r.report.bounds.push_back(check_le("size <= m+1", big(r.abp.abp.nodes()), big(m + 1)));
  r.report.bounds.push_back(check_le("output depth <= 3d-1", big(static_cast<std::uint64_t>(deepest)), big(3 * d - 1)));
  return r;
}

AbpResult weakly_skew_to_abp(const Circuit& c) {
  if (c.outputs().size() != 1) throw PreconditionViolated("weakly_skew_to_abp: single output required");
  AbpConstruction built = build_abp(c);
  const NodeId sink = built.outputs.front();
  Abp g(c.name(), sink);
  for (auto& e : built.edges) {
    if (e.to <= sink) g.add_edge(e.from, e.to, std::move(e.label));
  }
  AbpResult r{trim(g), {}};
  r.report.pass = "weakly_skew_to_abp";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output_abp = abp_stats(r.abp);
  const auto m = r.report.input->size;
  const auto d = r.report.input->formal_degree;
  r.report.bounds.push_back(check_le("size <= m+1", big(r.report.output_abp->size), big(m + 1)));
  r.report.bounds.push_back(check_le("depth <= 3d-1", big(r.report.output_abp->depth), big(3 * d - 1)));
  return r;
}

AbpResult circuit_to_abp(const Circuit& c) {
  if (!check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok) {
    throw PreconditionViolated("circuit_to_abp: non-binary multiplication");
  }
  Transformed collapsed = collapse_additions(c);
  Transformed skew = to_weakly_skew(collapsed.circuit);
  AbpResult a = weakly_skew_to_abp(skew.circuit);
  AbpResult r{trim(a.abp), {}};
  r.report.pass = "circuit_to_abp";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output_abp = abp_stats(r.abp);
  r.report.note("weakly_skew_size", std::to_string(skew.circuit.size()));
  const auto t = r.report.input->size;
  const auto d = r.report.input->formal_degree;
  r.report.bounds.push_back(
      check_le("size <= t^log2(2d)+1", big(r.report.output_abp->size), tows_bound(t, d) + UpReal(1.0)));
  r.report.bounds.push_back(check_le("depth <= 3d-1", big(r.report.output_abp->depth), big(3 * d - 1)));
  r.report.bounds.push_back(flag("trimmed", r.report.output_abp->trimmed));
  if (check_shape(c, ShapeSpec::ConstantFree).ok && ordinary_additive(c)) {
    r.report.bounds.push_back(check_le("constant labels <= 2^t", max_const_label(r.abp), pow2(t)));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

using Pattern = std::vector<std::vector<char>>;

Pattern bool_product(const Pattern& a, const Pattern& b) {
  const std::size_t n = a.size();
  Pattern c(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[k][j];
    }
  }
  return c;
}

Pattern identity_pattern(std::size_t n) {
  Pattern p(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  return p;
}

bool entry_is_zero(const MatrixEntry& e) {
  return e.kind == MatrixEntry::Kind::Zero || (e.kind == MatrixEntry::Kind::Const && e.value == 0);
}

constexpr std::size_t kPoweringGateLimit = 4'000'000;

// Cascaded brute-force powering: stage s raises the stage s-1 matrix to
// the power exps[s-1] as one layer of products under one layer of sums.
class Powering {
 public:
  Powering(const LabeledMatrix& m, std::vector<std::uint64_t> exps, bool formula, bool prune, std::string name)
      : m_(m), exps_(std::move(exps)), formula_(formula), out_(std::move(name)) {
    const std::size_t n = m.dim();
    Pattern p(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p[i][j] = prune ? !entry_is_zero(m.at(i, j)) : 1;
    }
    pattern_.push_back(p);
    for (std::uint64_t r : exps_) {
      std::vector<Pattern> reach{identity_pattern(n)};
      for (std::uint64_t l = 1; l <= r; ++l) reach.push_back(bool_product(reach.back(), pattern_.back()));
      pattern_.push_back(reach.back());
      reach.pop_back();
      reach_.push_back(std::move(reach));
    }
    walks_.resize(exps_.size() + 1);
    memo_.resize(exps_.size() + 1);
  }

  Circuit run(std::size_t row, std::size_t col) {
    const std::size_t s = exps_.size();
    if (!pattern_[s][row][col]) {
      out_.mark_output(out_.constant(0));
    } else {
      out_.mark_output(entry(s, row, col));
    }
    return std::move(out_);
  }

 private:
  using Walk = std::vector<std::uint32_t>;

  const std::vector<Walk>& walks(std::size_t s, std::size_t i, std::size_t j) {
    auto key = std::make_pair(i, j);
    auto it = walks_[s].find(key);
    if (it != walks_[s].end()) return it->second;
    const std::uint64_t r = exps_[s - 1];
    const Pattern& p = pattern_[s - 1];
    const auto& reach = reach_[s - 1];
    std::vector<Walk> found;
    Walk cur{static_cast<std::uint32_t>(i)};
    std::function<void()> dfs = [&] {
      const std::size_t v = cur.back();
      const std::uint64_t left = r - (cur.size() - 1);
      if (left == 0) {
        found.push_back(cur);
        return;
      }
      for (std::size_t w = 0; w < p.size(); ++w) {
        if (p[v][w] && reach[left - 1][w][j]) {
          cur.push_back(static_cast<std::uint32_t>(w));
          dfs();
          cur.pop_back();
        }
      }
    };
    dfs();
    return walks_[s].emplace(key, std::move(found)).first->second;
  }

  GateId leaf(std::size_t i, std::size_t j) {
    const MatrixEntry& e = m_.at(i, j);
    switch (e.kind) {
      case MatrixEntry::Kind::Var:
        if (formula_) return out_.input(e.var);
        if (auto it = vars_.find(e.var); it != vars_.end()) return it->second;
        return vars_[e.var] = out_.input(e.var);
      case MatrixEntry::Kind::Zero:
      case MatrixEntry::Kind::One:
      case MatrixEntry::Kind::Const: {
        BigInt v = e.kind == MatrixEntry::Kind::Zero ? BigInt(0) : e.kind == MatrixEntry::Kind::One ? BigInt(1) : e.value;
        if (formula_) return out_.constant(v);
        auto key = to_string(v);
        if (auto it = consts_.find(key); it != consts_.end()) return it->second;
        return consts_[key] = out_.constant(v);
      }
    }
    return 0;
  }

  GateId entry(std::size_t s, std::size_t i, std::size_t j) {
    if (s == 0) return leaf(i, j);
    if (exps_[s - 1] == 1) return entry(s - 1, i, j);
    auto key = std::make_pair(i, j);
    if (!formula_) {
      if (auto it = memo_[s].find(key); it != memo_[s].end()) return it->second;
    }
    std::vector<GateId> products;
    for (const Walk& w : walks(s, i, j)) {
      std::vector<GateId> factors;
      for (std::size_t k = 0; k + 1 < w.size(); ++k) factors.push_back(entry(s - 1, w[k], w[k + 1]));
      products.push_back(out_.mul(std::move(factors)));
    }
    // A sum over a single product is that product.
    GateId sum = products.size() == 1 ? products.front() : out_.add(std::move(products));
    if (out_.size() > kPoweringGateLimit) throw CapExceeded(0, out_.size());
    if (!formula_) memo_[s].emplace(key, sum);
    return sum;
  }

  const LabeledMatrix& m_;
  std::vector<std::uint64_t> exps_;
  bool formula_;
  Circuit out_;
  std::vector<Pattern> pattern_;
  std::vector<std::vector<Pattern>> reach_;
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::vector<Walk>>> walks_;
  std::vector<std::map<std::pair<std::size_t, std::size_t>, GateId>> memo_;
  std::map<std::string, GateId> vars_;
  std::map<std::string, GateId> consts_;
};

struct GateCounts {
  std::size_t adds = 0, muls = 0;
  std::size_t min_mul_fanin = SIZE_MAX, max_mul_fanin = 0;
  bool unweighted = true;
};

GateCounts count_gates(const Circuit& c) {
  GateCounts k;
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Add || g.kind == GateKind::Sub) {
      ++k.adds;
      if (g.kind == GateKind::Sub) k.unweighted = false;
      for (const auto& w : g.weights) {
        if (w != 1) k.unweighted = false;
      }
    } else if (g.kind == GateKind::Mul) {
      ++k.muls;
      k.min_mul_fanin = std::min(k.min_mul_fanin, g.children.size());
      k.max_mul_fanin = std::max(k.max_mul_fanin, g.children.size());
    }
  }
  return k;
}

BigInt upow(std::uint64_t base, std::uint64_t e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

}  // namespace

Transformed abp_to_depth4(const Abp& g, Depth4Mode mode, bool prune_zero_terms) {
  LabeledMatrix m = abp_to_matrix(g);
  AbpStats st = abp_stats(g);
  const std::uint64_t delta = std::max<std::uint64_t>(st.depth, 1);
  const std::uint64_t q = integer_root_ceil(delta, 2);
  const bool formula = mode == Depth4Mode::Formula;
  Transformed r{Powering(m, {q, q}, formula, prune_zero_terms, g.name()).run(0, g.nodes() - 1), {}};
  r.report.pass = formula ? "abp_to_depth4[formula]" : "abp_to_depth4[circuit]";
  r.report.instance = g.name();
  r.report.input_abp = st;
  r.report.output = circuit_stats(r.circuit);
  r.report.note("q", std::to_string(q));
  GateCounts k = count_gates(r.circuit);
  const std::uint64_t n = g.nodes();
  r.report.bounds.push_back(flag("depth-4 sigma-pi-sigma-pi", check_shape(r.circuit, ShapeSpec::Depth4SigmaPiSigmaPi).ok));
  r.report.bounds.push_back(flag("additions unweighted", k.unweighted));
  if (q > 1 && k.muls > 0) {
    r.report.bounds.push_back(check_eq("max multiplication fan-in = ceil(sqrt(depth))", big(k.max_mul_fanin), big(q)));
    r.report.bounds.push_back(check_eq("min multiplication fan-in = ceil(sqrt(depth))", big(k.min_mul_fanin), big(q)));
  }
  if (formula) {
    r.report.bounds.push_back(check_le("additions <= m^(q-1)+1", big(k.adds), upow(n, q - 1) + 1));
    r.report.bounds.push_back(
        check_le("multiplications <= m^(q-1)+m^(2q-2)", big(k.muls), upow(n, q - 1) + upow(n, 2 * q - 2)));
  } else {
    r.report.bounds.push_back(check_le("additions <= m^2+1", big(k.adds), upow(n, 2) + 1));
    r.report.bounds.push_back(
        check_le("multiplications <= m^(q+1)+m^(q-1)", big(k.muls), upow(n, q + 1) + upow(n, q - 1)));
  }
  return r;
}

Transformed abp_to_depth_2delta(const Abp& g, unsigned delta_stages, bool prune_zero_terms) {
  if (delta_stages < 2) throw PreconditionViolated("abp_to_depth_2delta: Delta must be at least 2");
  LabeledMatrix m = abp_to_matrix(g);
  AbpStats st = abp_stats(g);
  const std::uint64_t depth = std::max<std::uint64_t>(st.depth, 1);
  const std::uint64_t r_exp = integer_root_ceil(depth, delta_stages);
  std::vector<std::uint64_t> exps(delta_stages, r_exp);
  Transformed r{Powering(m, exps, false, prune_zero_terms, g.name()).run(0, g.nodes() - 1), {}};
  r.report.pass = "abp_to_depth_2delta";
  r.report.instance = g.name();
  r.report.input_abp = st;
  r.report.output = circuit_stats(r.circuit);
  r.report.note("r", std::to_string(r_exp));
  r.report.note("Delta", std::to_string(delta_stages));
  if (g.nodes() > 1 && r.report.output->size > 1) {
    double e = std::log(static_cast<double>(r.report.output->size)) / std::log(static_cast<double>(g.nodes()));
    r.report.note("log_m(size)", std::to_string(e));
  }
  r.report.bounds.push_back(check_le("depth <= 2 Delta", big(r.report.output->depth), big(2ull * delta_stages)));
  return r;
}

// ---------------------------------------------------------------------------

Transformed abp_to_logdepth(const Abp& g) {
  LabeledMatrix m = abp_to_matrix_with_identity(g);
  const std::size_t n = m.dim();
  auto depths = node_depths(g);
  std::int64_t deepest = 0;
  for (auto d : depths) deepest = std::max(deepest, d);
  const std::uint64_t delta = std::max<std::int64_t>(deepest, 1);
  const std::uint64_t stages = ceil_log2(delta);

  // U_k = sum_{l<=k} M^l and Q_k = M^k for k = 2^s; the identity diagonal
  // of U is never materialized in products since
  //   U_2k = U_k + (U_k - I) Q_k.
  // Only row 1 of U is ever needed.
  std::vector<Pattern> pq(1, Pattern(n, std::vector<char>(n, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pq[0][i][j] = i != j && !entry_is_zero(m.at(i, j));
  }
  for (std::uint64_t s = 0; s < stages; ++s) pq.push_back(bool_product(pq.back(), pq.back()));
  std::vector<std::vector<char>> pu(stages + 1, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < n; ++j) pu[0][j] = j == 0 || pq[0][0][j];
  for (std::uint64_t s = 1; s <= stages; ++s) {
    pu[s] = pu[s - 1];
    for (std::size_t l = 1; l < n; ++l) {
      if (!pu[s - 1][l]) continue;
      for (std::size_t j = 0; j < n; ++j) pu[s][j] |= pq[s - 1][l][j];
    }
  }
  std::vector<Pattern> need(stages + 1, Pattern(n, std::vector<char>(n, 0)));
  for (std::uint64_t s = stages; s > 0; --s) {
    Pattern& nq = need[s - 1];
    const Pattern& p = pq[s - 1];
    for (std::size_t l = 1; l < n; ++l) {
      if (!pu[s - 1][l]) continue;
      for (std::size_t j = 0; j < n; ++j) nq[l][j] |= p[l][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!need[s][i][j] || !pq[s][i][j]) continue;
        for (std::size_t k = 0; k < n; ++k) {
          if (p[i][k] && p[k][j]) nq[i][k] = nq[k][j] = 1;
        }
      }
    }
  }

  // Entry values: 0 = zero, 1 = one, otherwise gate id + 2.
  constexpr std::uint64_t kZero = 0, kOne = 1;
  Circuit out(g.name());
  std::map<std::string, GateId> leaves;
  auto var_leaf = [&](const std::string& v) {
    auto it = leaves.find("v:" + v);
    return it != leaves.end() ? it->second : (leaves["v:" + v] = out.input(v));
  };
  auto const_leaf = [&](const BigInt& c) {
    auto key = "c:" + to_string(c);
    auto it = leaves.find(key);
    return it != leaves.end() ? it->second : (leaves[key] = out.constant(c));
  };
  auto as_gate = [&](std::uint64_t e) -> GateId { return e == kOne ? const_leaf(1) : static_cast<GateId>(e - 2); };
  auto leaf_of = [&](const MatrixEntry& e) -> std::uint64_t {
    if (e.kind == MatrixEntry::Kind::One) return kOne;
    if (e.kind == MatrixEntry::Kind::Var) return var_leaf(e.var) + 2ull;
    return const_leaf(e.value) + 2ull;
  };
  auto product = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (a == kOne) return b;
    if (b == kOne) return a;
    return out.mul(as_gate(a), as_gate(b)) + 2ull;
  };
  auto sum = [&](const std::vector<std::uint64_t>& terms) -> std::uint64_t {
    if (terms.empty()) return kZero;
    if (terms.size() == 1) return terms.front();
    std::vector<GateId> kids;
    for (auto t : terms) kids.push_back(as_gate(t));
    return out.add(std::move(kids)) + 2ull;
  };

  using Grid = std::vector<std::vector<std::uint64_t>>;
  Grid q(n, std::vector<std::uint64_t>(n, kZero));
  std::vector<std::uint64_t> u(n, kZero);
  for (std::size_t j = 0; j < n; ++j) {
    if (pu[0][j]) u[j] = j == 0 ? kOne : leaf_of(m.at(0, j));
    for (std::size_t i = 0; i < n; ++i) {
      if (need[0][i][j] && pq[0][i][j]) q[i][j] = leaf_of(m.at(i, j));
    }
  }
  for (std::uint64_t s = 1; s <= stages; ++s) {
    Grid q2(n, std::vector<std::uint64_t>(n, kZero));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!need[s][i][j] || !pq[s][i][j]) continue;
        std::vector<std::uint64_t> terms;
        for (std::size_t k = 0; k < n; ++k) {
          if (q[i][k] != kZero && q[k][j] != kZero) terms.push_back(product(q[i][k], q[k][j]));
        }
        q2[i][j] = sum(terms);
      }
    }
    std::vector<std::uint64_t> u2(n, kZero);
    for (std::size_t j = 0; j < n; ++j) {
      if (!pu[s][j]) continue;
      std::vector<std::uint64_t> terms;
      if (u[j] != kZero) terms.push_back(u[j]);
      for (std::size_t l = 1; l < n; ++l) {
        if (u[l] != kZero && q[l][j] != kZero) terms.push_back(product(u[l], q[l][j]));
      }
      u2[j] = sum(terms);
    }
    q = std::move(q2);
    u = std::move(u2);
  }
  for (std::size_t j = 0; j < n; ++j) out.mark_output(u[j] == kZero ? const_leaf(0) : as_gate(u[j]));

  Transformed r{std::move(out), {}};
  r.report.pass = "abp_to_logdepth";
  r.report.instance = g.name();
  r.report.input_abp = abp_stats(g);
  r.report.output = circuit_stats(r.circuit);
  r.report.note("stages", std::to_string(stages));
  GateCounts k = count_gates(r.circuit);
  r.report.bounds.push_back(check_le("depth <= 2 ceil(log2 depth)", big(r.report.output->depth), big(2 * stages)));
  r.report.bounds.push_back(check_le("multiplications <= m^3 ceil(log2 depth)", big(k.muls), upow(n, 3) * big(stages)));
  r.report.bounds.push_back(check_le("additions <= m^2 ceil(log2 depth)", big(k.adds), upow(n, 2) * big(stages)));
  r.report.bounds.push_back(check_le("multiplication fan-in <= 2", big(k.max_mul_fanin), 2));
  return r;
}

// ---------------------------------------------------------------------------

Transformed reduce_to_depth4(const Circuit& c, const PipelineConfig& cfg) {
  if (!check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok) {
    throw PreconditionViolated("reduce_to_depth4: non-binary multiplication");
  }
  const Depth4Mode mode = cfg.target == Target::Depth4Formula ? Depth4Mode::Formula : Depth4Mode::Circuit;
  const std::size_t t = c.size();
  const std::uint64_t d = formal_degree(c);
  bool fast = false;
  Abp abp;
  PassReport abp_report;
  if (check_shape(c, ShapeSpec::WeaklySkew).ok) {
    Circuit collapsed = collapse_additions(c).circuit;
    if (check_shape(collapsed, ShapeSpec::WeaklySkew).ok) {
      AbpResult a = weakly_skew_to_abp(collapsed);
      abp = std::move(a.abp);
      abp_report = std::move(a.report);
      fast = true;
    }
  }
  if (!fast) {
    AbpResult a = circuit_to_abp(c);
    abp = std::move(a.abp);
    abp_report = std::move(a.report);
  }
  Transformed d4 = abp_to_depth4(abp, mode, cfg.prune_zero_terms);

  Transformed r{std::move(d4.circuit), {}};
  r.report.pass = mode == Depth4Mode::Formula ? "reduce_to_depth4[formula]" : "reduce_to_depth4[circuit]";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output = circuit_stats(r.circuit);
  r.report.output_abp = abp_stats(abp);
  r.report.note("path", fast ? "weakly-skew" : "general");
  append(r.report, abp_report, "abp");
  append(r.report, d4.report, "depth4");

  // T = t+1 on the weakly skew path, t^log2(2d)+1 otherwise.
  UpReal T = fast ? UpReal(big(t + 1)) : tows_bound(t, d) + UpReal(1.0);
  UpReal s3d = UpReal::sqrt(UpReal(big(3 * d)));
  GateCounts k = count_gates(r.circuit);
  if (mode == Depth4Mode::Circuit) {
    r.report.bounds.push_back(check_le("additions <= T^2+1", big(k.adds), T * T + UpReal(1.0)));
    r.report.bounds.push_back(
        check_le("multiplications <= 2 T^(sqrt(3d)+2)", big(k.muls), UpReal(2.0) * UpReal::pow(T, s3d + UpReal(2.0))));
  } else {
    r.report.bounds.push_back(check_le("additions <= T^sqrt(3d)+1", big(k.adds), UpReal::pow(T, s3d) + UpReal(1.0)));
    r.report.bounds.push_back(
        check_le("multiplications <= 2 T^(2 sqrt(3d))", big(k.muls), UpReal(2.0) * UpReal::pow(T, UpReal(2.0) * s3d)));
  }
  r.report.bounds.push_back(check_le("multiplication fan-in <= sqrt(3d)+1", big(k.max_mul_fanin), s3d + UpReal(1.0)));
  if (check_shape(c, ShapeSpec::ConstantFree).ok && ordinary_additive(c)) {
    r.report.bounds.push_back(check_le("constants <= 2^t", r.report.output->max_abs_constant, pow2(t)));
  }
  if (auto v = verify_equivalence(c, r.circuit, cfg.verify, r.report)) r.report.bounds.push_back(*v);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kPlaceholder = "@g";

}  // namespace

Transformed reduce_to_polylog(const Circuit& c, const VerifyConfig& verify) {
  if (!check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok) {
    throw PreconditionViolated("reduce_to_polylog: non-binary multiplication");
  }
  const auto& gates = c.gates();
  Topology topo = topology(c);
  auto deg = gate_degrees(c);
  const std::uint64_t d = formal_degree(c);
  const std::uint64_t layers = 1 + (ceil_log2(d + 1) - 1);  // 1 + floor(log2 d)
  std::vector<std::uint64_t> layer_of(gates.size(), 0);
  for (std::size_t i = 0; i < gates.size(); ++i) layer_of[i] = ceil_log2(deg[i] + 1) - 1;

  PassReport report;
  report.pass = "reduce_to_polylog";
  report.instance = c.name();
  report.input = circuit_stats(c);

  Circuit out(c.name());
  std::vector<std::optional<GateId>> final_gate(gates.size());
  std::map<std::string, GateId> shared_leaves;
  auto copy_leaf = [&](const Gate& g) -> GateId {
    std::string key = g.kind == GateKind::Input ? "v:" + g.var : "c:" + to_string(g.value);
    auto it = shared_leaves.find(key);
    if (it != shared_leaves.end()) return it->second;
    GateId id = g.kind == GateKind::Input ? out.input(g.var) : out.constant(g.value);
    return shared_leaves[key] = id;
  };

  std::uint64_t used_layers = 0;
  for (std::uint64_t layer = 0; layer < layers; ++layer) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (!gates[i].is_leaf() && layer_of[i] == layer) members.push_back(i);
    }
    if (members.empty()) continue;
    ++used_layers;
    const std::string tag = "layer " + std::to_string(layer);

    Circuit lc(c.name() + "." + std::to_string(layer));
    std::unordered_map<std::size_t, GateId> local;
    std::map<std::size_t, GateId> placeholders;
    for (std::size_t i : members) {
      std::vector<GateId> kids;
      for (std::size_t ch : topo.children[i]) {
        const Gate& cg = gates[ch];
        if (cg.is_leaf()) {
          kids.push_back(cg.kind == GateKind::Input ? lc.input(cg.var) : lc.constant(cg.value));
        } else if (layer_of[ch] == layer) {
          kids.push_back(local.at(ch));
        } else {
          auto it = placeholders.find(ch);
          if (it == placeholders.end()) {
            it = placeholders.emplace(ch, lc.input(kPlaceholder + std::to_string(ch))).first;
          }
          kids.push_back(it->second);
        }
      }
      Gate ng;
      ng.id = lc.next_id();
      ng.kind = gates[i].kind;
      ng.children = std::move(kids);
      ng.weights = gates[i].weights;
      local[i] = lc.push(std::move(ng));
    }
    std::vector<std::size_t> exported;
    for (std::size_t i : members) {
      bool out_edge = topo.is_output[i] || std::any_of(topo.consumers[i].begin(), topo.consumers[i].end(),
                                                       [&](std::size_t h) { return layer_of[h] != layer; });
      if (out_edge) {
        exported.push_back(i);
        lc.mark_output(local.at(i));
      }
    }

    ShapeVerdict skew = check_shape(lc, ShapeSpec::Skew);
    report.bounds.push_back(flag(tag + ": skew over lower layers", skew.ok));
    if (!skew.ok) throw LayerNotSkew(tag + ", gate " + std::to_string(*skew.witness) + ": " + skew.reason);

    Circuit prepared = normalize_leaf_fanout(collapse_additions(normalize_leaf_fanout(lc)).circuit);
    MultiAbpResult abp = weakly_skew_to_multi_abp(prepared);
    append(report, abp.report, tag);
    Transformed block = abp_to_logdepth(abp.abp.abp);
    append(report, block.report, tag);

    // Stitch the block into the result, substituting lower-layer gates.
    std::unordered_map<GateId, GateId> remap;
    const std::string prefix = kPlaceholder;
    for (const Gate& g : block.circuit.gates()) {
      if (g.kind == GateKind::Input && g.var.rfind(prefix, 0) == 0) {
        remap[g.id] = *final_gate[std::stoul(g.var.substr(prefix.size()))];
      } else if (g.is_leaf()) {
        remap[g.id] = copy_leaf(g);
      } else {
        Gate ng;
        ng.id = out.next_id();
        ng.kind = g.kind;
        for (GateId ch : g.children) ng.children.push_back(remap.at(ch));
        ng.weights = g.weights;
        remap[g.id] = out.push(std::move(ng));
      }
    }
    for (std::size_t k = 0; k < exported.size(); ++k) {
      NodeId node = abp.abp.outputs[k];
      final_gate[exported[k]] = remap.at(block.circuit.outputs()[node - 1]);
    }
  }
  for (std::size_t o : topo.outputs) {
    out.mark_output(gates[o].is_leaf() ? copy_leaf(gates[o]) : *final_gate[o]);
  }

  Transformed r{prune_dead(out), std::move(report)};
  r.report.output = circuit_stats(r.circuit);
  r.report.note("layers", std::to_string(used_layers));
  const std::uint64_t t = c.size();
  const BigInt depth_bound = big(4 * (1 + ceil_log2(t)) * layers);
  r.report.bounds.push_back(check_le("layers <= 1+floor(log2 d)", big(used_layers), big(layers)));
  r.report.bounds.push_back(
      check_le("depth <= 4 (1+ceil(log2 t)) (1+floor(log2 d))", big(r.report.output->depth), depth_bound, true));
  r.report.bounds.push_back(check_le("multiplication fan-in <= 2", big(r.report.output->max_mul_fanin), 2));
  if (auto v = verify_equivalence(c, r.circuit, verify, r.report)) r.report.bounds.push_back(*v);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::string> boolean_literals(unsigned n) {
  std::vector<std::string> names;
  for (unsigned i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (unsigned i = 1; i <= n; ++i) names.push_back("nx" + std::to_string(i));
  return names;
}

std::vector<bool> truth_table(const Circuit& c, unsigned n) {
  if (n > 20) throw PreconditionViolated("truth_table: too many literals");
  auto sr = boolean_semiring();
  std::vector<bool> rows;
  rows.reserve(std::size_t{1} << n);
  Assignment<bool> at;
  for (std::uint64_t row = 0; row < (std::uint64_t{1} << n); ++row) {
    for (unsigned i = 1; i <= n; ++i) {
      bool v = (row >> (i - 1)) & 1;
      at["x" + std::to_string(i)] = v;
      at["nx" + std::to_string(i)] = !v;
    }
    rows.push_back(eval_semiring(c, at, sr).front());
  }
  return rows;
}

unsigned boolean_literal_count(const Circuit& c) {
  unsigned n = 0;
  for (const auto& v : c.variables()) {
    std::size_t skip = v.rfind("nx", 0) == 0 ? 2 : v.rfind('x', 0) == 0 ? 1 : 0;
    if (skip == 0 || v.size() == skip ||
        !std::all_of(v.begin() + static_cast<std::ptrdiff_t>(skip), v.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      throw PreconditionViolated("reduce_boolean: variable '" + v + "' is not a literal x<i> or nx<i>");
    }
    n = std::max(n, static_cast<unsigned>(std::stoul(v.substr(skip))));
  }
  return n;
}

Transformed reduce_boolean(const Circuit& c, unsigned delta, const VerifyConfig& verify) {
  if (delta < 2) throw PreconditionViolated("reduce_boolean: Delta must be at least 2");
  auto semi = check_shape(c, ShapeSpec::SemiUnbounded);
  if (!semi.ok) throw PreconditionViolated("reduce_boolean: not semi-unbounded: " + semi.reason);
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Sub) throw StructureMismatch("reduce_boolean: subtraction gate " + std::to_string(g.id));
    if (g.kind == GateKind::Const && g.value != 0 && g.value != 1) {
      throw StructureMismatch("reduce_boolean: constant outside {0,1} at gate " + std::to_string(g.id));
    }
  }
  const unsigned n = boolean_literal_count(c);
  Circuit collapsed = collapse_additions(c, WeightAlgebra::Boolean).circuit;
  Transformed skew = to_weakly_skew(collapsed);
  AbpResult abp = weakly_skew_to_abp(skew.circuit);
  Abp trimmed = trim(abp.abp);
  Transformed flat = abp_to_depth_2delta(trimmed, delta);

  Transformed r{std::move(flat.circuit), {}};
  r.report.pass = "reduce_boolean";
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output = circuit_stats(r.circuit);
  r.report.output_abp = abp_stats(trimmed);
  r.report.note("Delta", std::to_string(delta));
  r.report.bounds.push_back(check_le("depth <= 2 Delta", big(r.report.output->depth), big(2ull * delta)));
  r.report.bounds.push_back(flag("boolean weights", r.report.output->max_abs_constant <= 1));
  if (verify.kind != VerifyConfig::Kind::None && n <= 12) {
    r.report.bounds.push_back(flag("truth table equal", truth_table(c, n) == truth_table(r.circuit, n)));
  }
  return r;
}

}  // namespace chasm
