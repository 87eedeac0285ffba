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

#include "chasm/normalize.hpp"

#include <algorithm>
#include <unordered_map>

#include "chasm/errors.hpp"
#include "chasm/semiring.hpp"

namespace chasm {

bool ordinary_additive(const Circuit& c) {
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Add && !g.is_ordinary_add()) return false;
  }
  return true;
}

namespace {

void require(bool cond, const std::string& pass, const std::string& what) {
  if (!cond) throw PreconditionViolated(pass + ": " + what);
}

}  // namespace

// ---------------------------------------------------------------------------

Transformed eliminate_subtractions(const Circuit& c) {
  const std::string pass = "eliminate_subtractions";
  require(check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok, pass, "non-binary multiplication");
  require(ordinary_additive(c), pass, "weighted or non-binary addition");
  require(check_shape(c, ShapeSpec::ConstantFree).ok, pass, "circuit is not constant-free");

  struct Pair {
    std::optional<GateId> pos, neg;
  };
  Circuit out(c.name());
  auto sum = [&](std::optional<GateId> a, std::optional<GateId> b) -> std::optional<GateId> {
    if (!a) return b;
    if (!b) return a;
    return out.add({*a, *b});
  };
  auto prod = [&](std::optional<GateId> a, std::optional<GateId> b) -> std::optional<GateId> {
    if (!a || !b) return std::nullopt;
    return out.mul(*a, *b);
  };

  std::unordered_map<GateId, Pair> pair;
  for (const Gate& g : c.gates()) {
    Pair p;
    switch (g.kind) {
      case GateKind::Input: p.pos = out.input(g.var); break;
      case GateKind::Const: p.pos = out.constant(g.value); break;
      case GateKind::Add: {
        const Pair& a = pair.at(g.children[0]);
        const Pair& b = pair.at(g.children[1]);
        p.pos = sum(a.pos, b.pos);
        p.neg = sum(a.neg, b.neg);
        break;
      }
      case GateKind::Sub: {
        const Pair& a = pair.at(g.children[0]);
        const Pair& b = pair.at(g.children[1]);
        p.pos = sum(a.pos, b.neg);
        p.neg = sum(a.neg, b.pos);
        break;
      }
      case GateKind::Mul: {
        const Pair a = pair.at(g.children[0]);
        const Pair b = pair.at(g.children[1]);
        p.pos = sum(prod(a.pos, b.pos), prod(a.neg, b.neg));
        p.neg = sum(prod(a.neg, b.pos), prod(a.pos, b.neg));
        break;
      }
    }
    pair.emplace(g.id, p);
  }
  for (GateId o : c.outputs()) {
    const Pair& p = pair.at(o);
    if (!p.neg) {
      out.mark_output(p.pos ? *p.pos : out.constant(0));
      continue;
    }
    GateId minus_one = out.constant(-1);
    GateId negated = out.mul(minus_one, *p.neg);
    out.mark_output(p.pos ? out.add({*p.pos, negated}) : negated);
  }

  Transformed r{std::move(out), {}};
  r.report.pass = pass;
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output = circuit_stats(r.circuit);
  const auto t = big(r.report.input->size);
  const auto d = big(r.report.input->formal_degree);
  r.report.bounds.push_back(check_le("size <= 6t+3", big(r.report.output->size), 6 * t + 3));
  r.report.bounds.push_back(check_le("formal degree <= d+1", big(r.report.output->formal_degree), d + 1));
  r.report.bounds.push_back(check_eq("subtraction gates", big(r.report.output->num_subs), 0));
  r.report.bounds.push_back(
      check_eq("constant-free", check_shape(r.circuit, ShapeSpec::ConstantFree).ok ? 1 : 0, 1));
  return r;
}

// ---------------------------------------------------------------------------

Transformed collapse_additions(const Circuit& c, WeightAlgebra algebra) {
  const std::string pass = "collapse_additions";
  require(check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok, pass, "non-binary multiplication");
  const bool boolean = algebra == WeightAlgebra::Boolean;
  const auto& gates = c.gates();
  Topology t = topology(c);

  // Linear form of each additive gate over atoms (leaf or Mul positions).
  using Form = std::map<std::size_t, BigInt>;
  std::vector<Form> form(gates.size());
  auto accumulate = [&](Form& dst, std::size_t atom, const BigInt& w) {
    auto [it, inserted] = dst.emplace(atom, w);
    if (!inserted) it->second = boolean ? BigInt(it->second + w > 0 ? 1 : 0) : BigInt(it->second + w);
  };
  std::size_t additive = 0;
  std::size_t products = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.kind == GateKind::Mul) ++products;
    if (!g.is_additive()) continue;
    ++additive;
    if (boolean && g.kind == GateKind::Sub) throw StructureMismatch(pass + ": subtraction over the boolean semiring");
    for (std::size_t k = 0; k < t.children[i].size(); ++k) {
      BigInt w = g.kind == GateKind::Add ? g.weights[k] : BigInt(k == 0 ? 1 : -1);
      if (boolean && w != 0 && w != 1) throw StructureMismatch(pass + ": boolean weight outside {0,1}");
      std::size_t ch = t.children[i][k];
      if (gates[ch].is_additive()) {
        for (const auto& [atom, cw] : form[ch]) accumulate(form[i], atom, boolean ? BigInt(w * cw) : BigInt(w * cw));
      } else {
        accumulate(form[i], ch, w);
      }
    }
  }

  Circuit out(c.name());
  std::vector<GateId> remap(gates.size(), 0);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.is_leaf()) {
      remap[i] = g.kind == GateKind::Input ? out.input(g.var) : out.constant(g.value);
    } else if (g.kind == GateKind::Mul) {
      std::vector<GateId> kids;
      for (std::size_t ch : t.children[i]) kids.push_back(remap[ch]);
      remap[i] = out.mul(std::move(kids));
    } else {
      bool needed = t.is_output[i] || std::any_of(t.consumers[i].begin(), t.consumers[i].end(),
                                                  [&](std::size_t h) { return !gates[h].is_additive(); });
      if (!needed) continue;
      std::vector<GateId> kids;
      std::vector<BigInt> weights;
      for (const auto& [atom, w] : form[i]) {
        kids.push_back(remap[atom]);
        weights.push_back(w);
      }
      remap[i] = out.add(std::move(kids), std::move(weights));
    }
  }
  for (std::size_t o : t.outputs) out.mark_output(remap[o]);

  Transformed r{std::move(out), {}};
  r.report.pass = pass;
  r.report.instance = c.name();
  r.report.input = circuit_stats(c);
  r.report.output = circuit_stats(r.circuit);
  const auto& os = *r.report.output;
  r.report.bounds.push_back(check_le("addition gates <= s", big(os.num_adds + os.num_subs), big(additive)));
  r.report.bounds.push_back(check_eq("multiplication gates = m", big(os.num_muls), big(products)));
  r.report.bounds.push_back(
      check_eq("formal degree preserved", big(os.formal_degree), big(r.report.input->formal_degree)));
  r.report.bounds.push_back(
      check_eq("additions feed only multiplications", check_shape(r.circuit, ShapeSpec::AddFeedsOnlyMul).ok ? 1 : 0, 1));
  if (ordinary_additive(c)) {
    r.report.bounds.push_back(
        check_le("addition total weight <= 2^s", os.max_add_total_weight, pow2(additive)));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

class Homogenizer {
 public:
  Homogenizer(const Circuit& in, HomogenizeMode mode, std::uint64_t target)
      : in_(in), mode_(mode), target_(target), out_(in.name()) {}

  Homogenized run() {
    const auto& gates = in_.gates();
    auto degrees = gate_degrees(in_);
    Assignment<BigInt> origin;
    for (const auto& v : in_.variables()) origin[v] = 0;
    auto constant = eval_gates(in_, origin, integer_ring());

    comp_.resize(gates.size());
    Homogenized result{Circuit(), {}, {}, target_};
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      const std::uint64_t top = std::min(target_, degrees[i]);
      auto& mine = comp_[i];
      mine.assign(top + 1, std::nullopt);
      switch (g.kind) {
        case GateKind::Input:
          if (top >= 1) mine[1] = out_.input(g.var);
          break;
        case GateKind::Const:
          break;
        case GateKind::Add:
        case GateKind::Sub: {
          for (std::uint64_t d = 1; d <= top; ++d) {
            std::vector<std::pair<GateId, BigInt>> terms;
            for (std::size_t k = 0; k < g.children.size(); ++k) {
              auto part = component(in_.index_of(g.children[k]), d);
              if (!part) continue;
              BigInt w = g.kind == GateKind::Add ? g.weights[k] : BigInt(k == 0 ? 1 : -1);
              terms.emplace_back(*part, w);
            }
            mine[d] = linear(terms);
          }
          break;
        }
        case GateKind::Mul: {
          std::size_t a = in_.index_of(g.children[0]);
          std::size_t b = in_.index_of(g.children[1]);
          for (std::uint64_t d = 1; d <= top; ++d) {
            std::vector<GateId> terms;
            if (auto x = scale(component(b, d), constant[a])) terms.push_back(*x);
            for (std::uint64_t j = 1; j < d; ++j) {
              auto x = component(a, j);
              auto y = component(b, d - j);
              if (x && y) terms.push_back(out_.mul(*x, *y));
            }
            if (auto x = scale(component(a, d), constant[b])) terms.push_back(*x);
            mine[d] = chain(terms);
          }
          break;
        }
      }
      for (std::uint64_t d = 1; d <= top; ++d) {
        if (mine[d]) result.components.emplace(std::make_pair(g.id, d), *mine[d]);
      }
    }

    const std::size_t o = in_.index_of(in_.outputs().front());
    std::vector<GateId> parts;
    for (std::uint64_t d = target_; d >= 1; --d) {
      if (auto x = component(o, d)) parts.push_back(*x);
    }
    auto body = chain(parts);
    out_.mark_output(add_constant(body, constant[o]));
    result.circuit = std::move(out_);
    return result;
  }

 private:
  std::optional<GateId> component(std::size_t pos, std::uint64_t d) const {
    const auto& v = comp_[pos];
    return d < v.size() ? v[d] : std::nullopt;
  }

  std::optional<GateId> chain(const std::vector<GateId>& terms) {
    if (terms.empty()) return std::nullopt;
    GateId acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = out_.add({acc, terms[i]});
    return acc;
  }

  // Sum of w_k * x_k with unit weights kept as ordinary additions.
  std::optional<GateId> linear(const std::vector<std::pair<GateId, BigInt>>& terms) {
    std::vector<GateId> pos, neg;
    for (const auto& [g, w] : terms) {
      if (w == 0) continue;
      if (w > 0) {
        if (auto x = scale(g, w)) pos.push_back(*x);
      } else if (mode_ == HomogenizeMode::Vp) {
        if (auto x = scale(g, w)) pos.push_back(*x);
      } else {
        if (auto x = scale(g, -w)) neg.push_back(*x);
      }
    }
    auto p = chain(pos);
    auto n = chain(neg);
    if (!n) return p;
    if (!p) return out_.sub(zero_leaf(), *n);
    return out_.sub(*p, *n);
  }

  std::optional<GateId> scale(std::optional<GateId> g, const BigInt& c) {
    if (!g || c == 0) return std::nullopt;
    if (c == 1) return g;
    if (mode_ == HomogenizeMode::Vp) return out_.add({*g}, {c});
    GateId acc = doubling(*g, abs(c));
    if (c < 0) acc = out_.sub(zero_leaf(), acc);
    return acc;
  }

  // |m| * g via most-significant-bit-first doubling, additions only.
  GateId doubling(GateId g, const BigInt& m) {
    std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    GateId acc = g;
    for (std::size_t b = bits - 1; b-- > 0;) {
      acc = out_.add({acc, acc});
      if (mpz_tstbit(m.get_mpz_t(), b)) acc = out_.add({acc, g});
    }
    return acc;
  }

  GateId zero_leaf() { return out_.constant(0); }

  GateId add_constant(std::optional<GateId> body, const BigInt& c0) {
    if (c0 == 0) return body ? *body : out_.constant(0);
    if (mode_ == HomogenizeMode::Vp) {
      GateId k = out_.constant(c0);
      return body ? out_.add({*body, k}) : k;
    }
    GateId magnitude = doubling(out_.constant(1), abs(c0));
    if (c0 > 0) return body ? out_.add({*body, magnitude}) : magnitude;
    return out_.sub(body ? *body : zero_leaf(), magnitude);
  }

  const Circuit& in_;
  HomogenizeMode mode_;
  std::uint64_t target_;
  Circuit out_;
  std::vector<std::vector<std::optional<GateId>>> comp_;
};

}  // namespace

Homogenized homogenize(const Circuit& c, const HomogenizeOptions& opts) {
  const std::string pass = "homogenize";
  require(c.outputs().size() == 1, pass, "single-output circuit required");
  require(check_shape(c, ShapeSpec::BinaryMultiplicationsOnly).ok, pass, "non-binary multiplication");
  for (const Gate& g : c.gates()) {
    if (g.kind != GateKind::Add) continue;
    bool unit = std::all_of(g.weights.begin(), g.weights.end(), [](const BigInt& w) { return w == 1; });
    require(unit && g.children.size() == 2, pass, "addition gate " + std::to_string(g.id) + " is not ordinary");
  }
  if (opts.mode == HomogenizeMode::Vp0) {
    require(check_shape(c, ShapeSpec::ConstantFree).ok, pass, "mode vp0 needs a constant-free circuit");
  }
  std::uint64_t target;
  if (opts.degree) {
    target = *opts.degree;
  } else {
    auto poly = expand_to_poly(c, opts.cap).front();
    target = poly.degree() < 0 ? 0 : static_cast<std::uint64_t>(poly.degree());
  }
  if (target > opts.degree_limit) {
    throw DegreeOverflow(pass + ": degree " + std::to_string(target) + " exceeds limit " +
                         std::to_string(opts.degree_limit));
  }

  Homogenized h = Homogenizer(c, opts.mode, target).run();
  h.report.pass = opts.mode == HomogenizeMode::Vp ? "homogenize[vp]" : "homogenize[vp0]";
  h.report.instance = c.name();
  h.report.input = circuit_stats(c);
  h.report.output = circuit_stats(h.circuit);
  h.report.note("target_degree", std::to_string(target));
  const auto t = big(h.report.input->size);
  const auto expected = big(std::max<std::uint64_t>(target, 1));
  h.report.bounds.push_back(check_eq("formal degree = max(deg f, 1)", big(h.report.output->formal_degree), expected));
  h.report.bounds.push_back(
      check_le("size <= 10 t (D+1)^2", big(h.report.output->size), 10 * t * (big(target) + 1) * (big(target) + 1), true));
  if (opts.mode == HomogenizeMode::Vp0) {
    h.report.bounds.push_back(
        check_eq("constant-free", check_shape(h.circuit, ShapeSpec::ConstantFree).ok ? 1 : 0, 1));
  }
  return h;
}

}  // namespace chasm
