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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/bigint.hpp"
#include "chasm/circuit.hpp"
#include "chasm/errors.hpp"

namespace chasm {

/// Commutative semiring descriptor used for point evaluation. `embed` maps
/// integer constants and weights into the structure (nullopt when they do
/// not embed); `neg` is only consulted when `is_ring`.
template <class T>
struct Semiring {
  std::string name;
  std::string domain;
  std::function<T(const T&, const T&)> add;
  std::function<T(const T&, const T&)> mul;
  T zero{};
  T one{};
  bool is_ring = false;
  std::function<T(const T&)> neg;
  std::function<std::optional<T>(const BigInt&)> embed;
};

/// Checks the commutative-semiring laws (and additive inverses for rings) on
/// every triple of samples. Throws Error naming the first failing law.
template <class T>
void self_test(const Semiring<T>& s, const std::vector<T>& samples) {
  auto fail = [&](const char* law) { throw Error("semiring '" + s.name + "' violates " + law); };
  for (const T& a : samples) {
    if (!(s.add(a, s.zero) == a)) fail("additive identity");
    if (!(s.mul(a, s.one) == a)) fail("multiplicative identity");
    if (!(s.mul(a, s.zero) == s.zero)) fail("annihilation");
    if (s.is_ring && !(s.add(a, s.neg(a)) == s.zero)) fail("additive inverse");
    for (const T& b : samples) {
      if (!(s.add(a, b) == s.add(b, a))) fail("additive commutativity");
      if (!(s.mul(a, b) == s.mul(b, a))) fail("multiplicative commutativity");
      for (const T& c : samples) {
        if (!(s.add(s.add(a, b), c) == s.add(a, s.add(b, c)))) fail("additive associativity");
        if (!(s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c)))) fail("multiplicative associativity");
        if (!(s.mul(a, s.add(b, c)) == s.add(s.mul(a, b), s.mul(a, c)))) fail("distributivity");
      }
    }
  }
}

Semiring<BigInt> integer_ring();
Semiring<std::uint64_t> prime_field();  // integers modulo 2^61-1
Semiring<bool> boolean_semiring();      // ({0,1}, OR, AND)
Semiring<BigInt> natural_semiring();    // (N, +, x)

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b);

template <class T>
using Assignment = std::map<std::string, T>;

namespace detail {

template <class T>
T embed_or_throw(const Semiring<T>& s, const BigInt& v, const char* what) {
  auto e = s.embed(v);
  if (!e) throw StructureMismatch(std::string(what) + " " + to_string(v) + " does not embed in " + s.name);
  return *e;
}

template <class T>
const T& lookup(const Assignment<T>& a, const std::string& var) {
  auto it = a.find(var);
  if (it == a.end()) throw Error("no value assigned to variable '" + var + "'");
  return it->second;
}

}  // namespace detail

/// Bottom-up evaluation of every gate (by position).
template <class T>
std::vector<T> eval_gates(const Circuit& c, const Assignment<T>& at, const Semiring<T>& s) {
  const auto& gates = c.gates();
  std::vector<T> val(gates.size(), s.zero);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    switch (g.kind) {
      case GateKind::Input: val[i] = detail::lookup(at, g.var); break;
      case GateKind::Const: val[i] = detail::embed_or_throw(s, g.value, "constant"); break;
      case GateKind::Add: {
        T acc = s.zero;
        for (std::size_t k = 0; k < g.children.size(); ++k) {
          const T& x = val[c.index_of(g.children[k])];
          const BigInt& w = g.weights[k];
          if (w == 1) {
            acc = s.add(acc, x);
          } else if (w == 0) {
            continue;
          } else {
            if (!s.is_ring) throw StructureMismatch("weight " + to_string(w) + " requires a ring, got " + s.name);
            acc = s.add(acc, s.mul(detail::embed_or_throw(s, w, "weight"), x));
          }
        }
        val[i] = acc;
        break;
      }
      case GateKind::Sub:
        if (!s.is_ring) throw StructureMismatch("subtraction requires a ring, got " + s.name);
        val[i] = s.add(val[c.index_of(g.children[0])], s.neg(val[c.index_of(g.children[1])]));
        break;
      case GateKind::Mul: {
        T acc = s.one;
        for (GateId ch : g.children) acc = s.mul(acc, val[c.index_of(ch)]);
        val[i] = acc;
        break;
      }
    }
  }
  return val;
}

/// Value of every output, in output order.
template <class T>
std::vector<T> eval_semiring(const Circuit& c, const Assignment<T>& at, const Semiring<T>& s) {
  auto val = eval_gates(c, at, s);
  std::vector<T> out;
  for (GateId o : c.outputs()) out.push_back(val[c.index_of(o)]);
  return out;
}

/// Source-to-node path sums for every node (index node-1), one forward pass.
template <class T>
std::vector<T> eval_abp_nodes(const Abp& g, const Assignment<T>& at, const Semiring<T>& s) {
  std::vector<std::vector<const AbpEdge*>> in(g.nodes() + 1);
  for (const auto& e : g.edges()) in[e.to].push_back(&e);
  std::vector<T> val(g.nodes(), s.zero);
  val[0] = s.one;
  for (NodeId v = 2; v <= g.nodes(); ++v) {
    T acc = s.zero;
    for (const AbpEdge* e : in[v]) {
      T w = e->label.is_var() ? detail::lookup(at, e->label.var)
                              : detail::embed_or_throw(s, e->label.value, "edge constant");
      acc = s.add(acc, s.mul(val[e->from - 1], w));
    }
    val[v - 1] = acc;
  }
  return val;
}

template <class T>
T eval_semiring(const Abp& g, const Assignment<T>& at, const Semiring<T>& s) {
  return eval_abp_nodes(g, at, s).back();
}

}  // namespace chasm
