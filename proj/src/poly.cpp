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

#include "chasm/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "chasm/errors.hpp"
#include "chasm/semiring.hpp"

namespace chasm {

std::size_t monomial_cap_from_env() {
  if (const char* env = std::getenv("CHASM_MONOMIAL_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMonomialCap;
}

SparsePoly::SparsePoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

SparsePoly SparsePoly::constant(std::vector<std::string> vars, const BigInt& c) {
  SparsePoly p(std::move(vars));
  p.add_term(Exponents(p.vars_.size(), 0), c);
  return p;
}

SparsePoly SparsePoly::variable(std::vector<std::string> vars, std::size_t index) {
  SparsePoly p(std::move(vars));
  Exponents e(p.vars_.size(), 0);
  e.at(index) = 1;
  p.add_term(e, 1);
  return p;
}

SparsePoly SparsePoly::variable(std::vector<std::string> vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw Error("variable '" + name + "' is not in the polynomial ring");
  std::size_t idx = static_cast<std::size_t>(it - vars.begin());
  return variable(std::move(vars), idx);
}

std::int64_t SparsePoly::degree() const {
  std::int64_t d = -1;
  for (const auto& [e, c] : terms_) {
    std::int64_t s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

BigInt SparsePoly::constant_term() const {
  auto it = terms_.find(Exponents(vars_.size(), 0));
  return it == terms_.end() ? BigInt(0) : it->second;
}

SparsePoly SparsePoly::homogeneous_part(std::uint64_t degree) const {
  SparsePoly out(vars_);
  for (const auto& [e, c] : terms_) {
    std::uint64_t s = 0;
    for (auto x : e) s += x;
    if (s == degree) out.terms_.emplace(e, c);
  }
  return out;
}

void SparsePoly::add_term(const Exponents& e, const BigInt& c) {
  if (e.size() != vars_.size()) throw Error("exponent vector arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void SparsePoly::require_same_vars(const SparsePoly& o) const {
  if (vars_ != o.vars_) throw Error("polynomials live in different variable rings");
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

SparsePoly& SparsePoly::scale(const BigInt& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

SparsePoly SparsePoly::times(const SparsePoly& o, std::size_t cap) const {
  require_same_vars(o);
  SparsePoly out(vars_);
  Exponents e(vars_.size());
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
    if (out.terms_.size() > cap) throw CapExceeded(0, out.terms_.size());
  }
  return out;
}

BigInt SparsePoly::evaluate(std::span<const BigInt> point) const {
  if (point.size() != vars_.size()) throw Error("evaluation point arity mismatch");
  BigInt total = 0;
  for (const auto& [e, c] : terms_) {
    BigInt t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      BigInt p;
      mpz_pow_ui(p.get_mpz_t(), point[i].get_mpz_t(), e[i]);
      t *= p;
    }
    total += t;
  }
  return total;
}

std::string SparsePoly::to_text() const {
  std::ostringstream os;
  for (const auto& [e, c] : terms_) {
    os << to_string(c);
    for (auto x : e) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> merged_vars(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

void check_cap(const SparsePoly& p, std::uint64_t where, std::size_t cap) {
  if (p.size() > cap) throw CapExceeded(where, p.size());
}

// Expands gates in order; when `keep_all` is false, a gate's polynomial is
// released as soon as its last consumer has been processed.
std::vector<SparsePoly> expand_impl(const Circuit& c, std::size_t cap, std::vector<std::string> vars,
                                    bool keep_all) {
  if (vars.empty()) vars = c.variables();
  const auto& gates = c.gates();
  Topology t = topology(c);
  std::vector<std::size_t> remaining(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) remaining[i] = t.consumers[i].size();
  std::vector<SparsePoly> val(gates.size(), SparsePoly(vars));
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    try {
      switch (g.kind) {
        case GateKind::Input: val[i] = SparsePoly::variable(vars, g.var); break;
        case GateKind::Const: val[i] = SparsePoly::constant(vars, g.value); break;
        case GateKind::Add: {
          SparsePoly acc(vars);
          for (std::size_t k = 0; k < g.children.size(); ++k) {
            const BigInt& w = g.weights[k];
            if (w == 0) continue;
            const SparsePoly& x = val[t.children[i][k]];
            if (w == 1) {
              acc += x;
            } else {
              SparsePoly y = x;
              acc += y.scale(w);
            }
            check_cap(acc, g.id, cap);
          }
          val[i] = std::move(acc);
          break;
        }
        case GateKind::Sub:
          val[i] = val[t.children[i][0]] - val[t.children[i][1]];
          break;
        case GateKind::Mul: {
          SparsePoly acc = val[t.children[i][0]];
          for (std::size_t k = 1; k < t.children[i].size(); ++k) acc = acc.times(val[t.children[i][k]], cap);
          val[i] = std::move(acc);
          break;
        }
      }
    } catch (const CapExceeded& e) {
      throw CapExceeded(g.id, e.count());
    }
    check_cap(val[i], g.id, cap);
    if (!keep_all) {
      for (std::size_t ch : t.children[i]) {
        if (--remaining[ch] == 0 && !t.is_output[ch]) val[ch] = SparsePoly(vars);
      }
    }
  }
  return val;
}

}  // namespace

std::vector<SparsePoly> expand_gates(const Circuit& c, std::size_t cap, std::vector<std::string> vars) {
  return expand_impl(c, cap, std::move(vars), true);
}

std::vector<SparsePoly> expand_to_poly(const Circuit& c, std::size_t cap, std::vector<std::string> vars) {
  auto val = expand_impl(c, cap, std::move(vars), false);
  std::vector<SparsePoly> out;
  for (GateId o : c.outputs()) out.push_back(val[c.index_of(o)]);
  return out;
}

std::vector<SparsePoly> expand_abp_nodes(const Abp& g, std::size_t cap, std::vector<std::string> vars) {
  if (vars.empty()) vars = g.variables();
  std::vector<std::vector<const AbpEdge*>> in(g.nodes() + 1);
  for (const auto& e : g.edges()) in[e.to].push_back(&e);
  std::vector<SparsePoly> val(g.nodes(), SparsePoly(vars));
  val[0] = SparsePoly::constant(vars, 1);
  for (NodeId v = 2; v <= g.nodes(); ++v) {
    SparsePoly acc(vars);
    for (const AbpEdge* e : in[v]) {
      const SparsePoly& from = val[e->from - 1];
      if (e->label.is_var()) {
        acc += from.times(SparsePoly::variable(vars, e->label.var), cap);
      } else {
        SparsePoly y = from;
        acc += y.scale(e->label.value);
      }
      check_cap(acc, v, cap);
    }
    val[v - 1] = std::move(acc);
  }
  return val;
}

SparsePoly expand_to_poly(const Abp& g, std::size_t cap, std::vector<std::string> vars) {
  return expand_abp_nodes(g, cap, std::move(vars)).back();
}

std::vector<std::vector<SparsePoly>> symbolic_power(const LabeledMatrix& m, std::uint64_t p,
                                                    const std::vector<std::string>& vars, std::size_t cap) {
  const std::size_t n = m.dim();
  std::vector<std::vector<SparsePoly>> base(n, std::vector<SparsePoly>(n, SparsePoly(vars)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const MatrixEntry& e = m.at(i, j);
      switch (e.kind) {
        case MatrixEntry::Kind::Zero: break;
        case MatrixEntry::Kind::One: base[i][j] = SparsePoly::constant(vars, 1); break;
        case MatrixEntry::Kind::Var: base[i][j] = SparsePoly::variable(vars, e.var); break;
        case MatrixEntry::Kind::Const: base[i][j] = SparsePoly::constant(vars, e.value); break;
      }
    }
  }
  std::vector<std::vector<SparsePoly>> acc(n, std::vector<SparsePoly>(n, SparsePoly(vars)));
  for (std::size_t i = 0; i < n; ++i) acc[i][i] = SparsePoly::constant(vars, 1);
  for (std::uint64_t step = 0; step < p; ++step) {
    std::vector<std::vector<SparsePoly>> next(n, std::vector<SparsePoly>(n, SparsePoly(vars)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (acc[i][k].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (base[k][j].is_zero()) continue;
          next[i][j] += acc[i][k].times(base[k][j], cap);
          check_cap(next[i][j], i * n + j, cap);
        }
      }
    }
    acc = std::move(next);
  }
  return acc;
}

bool equiv_exact(const Circuit& a, const Circuit& b, std::size_t cap) {
  auto vars = merged_vars(a.variables(), b.variables());
  auto pa = expand_to_poly(a, cap, vars);
  auto pb = expand_to_poly(b, cap, vars);
  return pa == pb;
}

bool equiv_exact(const Circuit& a, const Abp& b, std::size_t cap) {
  if (a.outputs().size() != 1) return false;
  auto vars = merged_vars(a.variables(), b.variables());
  return expand_to_poly(a, cap, vars).front() == expand_to_poly(b, cap, vars);
}

bool equiv_exact(const Abp& a, const Abp& b, std::size_t cap) {
  auto vars = merged_vars(a.variables(), b.variables());
  return expand_to_poly(a, cap, vars) == expand_to_poly(b, cap, vars);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t random_residue(std::mt19937_64& rng) {
  for (;;) {
    std::uint64_t v = rng() >> 3;
    if (v < kIdentityPrime) return v;
  }
}

template <class EvalB>
RandomVerdict random_test(const Circuit& a, const std::vector<std::string>& vars, std::size_t trials,
                          std::uint64_t seed, std::uint64_t degree_bound, EvalB&& eval_b) {
  auto field = prime_field();
  RandomVerdict v;
  v.trials = trials;
  v.degree_bound = std::max<std::uint64_t>(degree_bound, 1);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    Assignment<std::uint64_t> point;
    for (const auto& name : vars) point[name] = random_residue(rng);
    auto va = eval_semiring(a, point, field);
    auto vb = eval_b(point, field);
    if (va != vb) {
      v.equivalent = false;
      v.witness = point;
      v.log2_failure_bound = 0.0;
      return v;
    }
  }
  v.log2_failure_bound = static_cast<double>(trials) *
                         (std::log2(static_cast<double>(v.degree_bound)) - std::log2(static_cast<double>(kIdentityPrime)));
  return v;
}

}  // namespace

RandomVerdict equiv_random(const Circuit& a, const Circuit& b, std::size_t trials, std::uint64_t seed,
                           std::uint64_t degree_bound) {
  if (degree_bound == 0) degree_bound = std::max(formal_degree(a), formal_degree(b));
  auto vars = merged_vars(a.variables(), b.variables());
  return random_test(a, vars, trials, seed, degree_bound,
                     [&](const auto& point, const auto& field) { return eval_semiring(b, point, field); });
}

RandomVerdict equiv_random(const Circuit& a, const Abp& b, std::size_t trials, std::uint64_t seed,
                           std::uint64_t degree_bound) {
  if (degree_bound == 0) degree_bound = std::max<std::uint64_t>(formal_degree(a), abp_stats(b).depth);
  auto vars = merged_vars(a.variables(), b.variables());
  return random_test(a, vars, trials, seed, degree_bound, [&](const auto& point, const auto& field) {
    return std::vector<std::uint64_t>{eval_semiring(b, point, field)};
  });
}

// ---------------------------------------------------------------------------
// Semirings

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(prod & kIdentityPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kIdentityPrime) r -= kIdentityPrime;
  return r;
}

namespace {

std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kIdentityPrime) r -= kIdentityPrime;
  return r;
}

static_assert(sizeof(unsigned long) == 8, "residues are read with mpz_get_ui");

std::uint64_t reduce(const BigInt& v) {
  static const BigInt p("2305843009213693951");
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  return mpz_get_ui(r.get_mpz_t());
}

}  // namespace

Semiring<BigInt> integer_ring() {
  Semiring<BigInt> s;
  s.name = "integers";
  s.domain = "Z";
  s.add = [](const BigInt& a, const BigInt& b) -> BigInt { return a + b; };
  s.mul = [](const BigInt& a, const BigInt& b) -> BigInt { return a * b; };
  s.zero = 0;
  s.one = 1;
  s.is_ring = true;
  s.neg = [](const BigInt& a) -> BigInt { return -a; };
  s.embed = [](const BigInt& v) { return std::optional<BigInt>(v); };
  self_test(s, std::vector<BigInt>{-3, 0, 1, 7});
  return s;
}

Semiring<std::uint64_t> prime_field() {
  Semiring<std::uint64_t> s;
  s.name = "integers mod 2^61-1";
  s.domain = "Z/(2^61-1)";
  s.add = mod_add;
  s.mul = mod_mul;
  s.zero = 0;
  s.one = 1;
  s.is_ring = true;
  s.neg = [](const std::uint64_t& a) -> std::uint64_t { return a == 0 ? 0 : kIdentityPrime - a; };
  s.embed = [](const BigInt& v) { return std::optional<std::uint64_t>(reduce(v)); };
  self_test(s, std::vector<std::uint64_t>{0, 1, 2, kIdentityPrime - 1, 1234567890123ULL});
  return s;
}

Semiring<bool> boolean_semiring() {
  Semiring<bool> s;
  s.name = "boolean";
  s.domain = "{0,1} with OR, AND";
  s.add = [](const bool& a, const bool& b) { return a || b; };
  s.mul = [](const bool& a, const bool& b) { return a && b; };
  s.zero = false;
  s.one = true;
  s.is_ring = false;
  s.embed = [](const BigInt& v) -> std::optional<bool> {
    if (v == 0) return false;
    if (v == 1) return true;
    return std::nullopt;
  };
  self_test(s, std::vector<bool>{false, true});
  return s;
}

Semiring<BigInt> natural_semiring() {
  Semiring<BigInt> s;
  s.name = "naturals";
  s.domain = "N";
  s.add = [](const BigInt& a, const BigInt& b) -> BigInt { return a + b; };
  s.mul = [](const BigInt& a, const BigInt& b) -> BigInt { return a * b; };
  s.zero = 0;
  s.one = 1;
  s.is_ring = false;
  s.embed = [](const BigInt& v) -> std::optional<BigInt> {
    if (v < 0) return std::nullopt;
    return v;
  };
  self_test(s, std::vector<BigInt>{0, 1, 2, 9});
  return s;
}

}  // namespace chasm
