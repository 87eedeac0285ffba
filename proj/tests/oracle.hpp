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

// Reference implementations used only by tests. They share no code with
// the library beyond the data structures they read.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/circuit.hpp"
#include "chasm/poly.hpp"

namespace oracle {

using chasm::BigInt;
using Monomial = std::map<std::string, unsigned>;
using Poly = std::map<Monomial, BigInt>;

inline void add_into(Poly& dst, const Poly& src, const BigInt& scale = 1) {
  for (const auto& [m, c] : src) {
    BigInt v = dst[m] + scale * c;
    if (v == 0) dst.erase(m);
    else dst[m] = v;
  }
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      BigInt v = r[m] + ca * cb;
      if (v == 0) r.erase(m);
      else r[m] = v;
    }
  }
  return r;
}

inline Poly constant(const BigInt& c) {
  Poly p;
  if (c != 0) p[{}] = c;
  return p;
}

inline Poly variable(const std::string& v) { return Poly{{Monomial{{v, 1}}, 1}}; }

inline Poly from_sparse(const chasm::SparsePoly& s) {
  Poly p;
  for (const auto& [e, c] : s.terms()) {
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) m[s.vars()[i]] = e[i];
    }
    p[m] = c;
  }
  return p;
}

inline long degree(const Poly& p) {
  long d = -1;
  for (const auto& [m, c] : p) {
    long s = 0;
    for (const auto& [v, e] : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

inline Poly homogeneous_part(const Poly& p, unsigned d) {
  Poly r;
  for (const auto& [m, c] : p) {
    unsigned s = 0;
    for (const auto& [v, e] : m) s += e;
    if (s == d) r[m] = c;
  }
  return r;
}

/// Polynomial of every gate, by direct recursion over the gate list.
inline std::map<chasm::GateId, Poly> expand_all(const chasm::Circuit& c) {
  std::map<chasm::GateId, Poly> val;
  for (const auto& g : c.gates()) {
    Poly p;
    switch (g.kind) {
      case chasm::GateKind::Input: p = variable(g.var); break;
      case chasm::GateKind::Const: p = constant(g.value); break;
      case chasm::GateKind::Add:
        for (std::size_t k = 0; k < g.children.size(); ++k) add_into(p, val.at(g.children[k]), g.weights[k]);
        break;
      case chasm::GateKind::Sub:
        p = val.at(g.children[0]);
        add_into(p, val.at(g.children[1]), -1);
        break;
      case chasm::GateKind::Mul:
        p = constant(1);
        for (auto ch : g.children) p = mul(p, val.at(ch));
        break;
    }
    val[g.id] = std::move(p);
  }
  return val;
}

inline std::vector<Poly> expand(const chasm::Circuit& c) {
  auto val = expand_all(c);
  std::vector<Poly> out;
  for (auto o : c.outputs()) out.push_back(val.at(o));
  return out;
}

/// Sum over all paths from `from` to `to` of the product of edge labels,
/// accumulated node by node in increasing order (edges go forward).
inline Poly path_sum(const chasm::Abp& g, chasm::NodeId from, chasm::NodeId to) {
  std::map<chasm::NodeId, Poly> at;
  at[from] = constant(1);
  std::vector<const chasm::AbpEdge*> edges;
  for (const auto& e : g.edges()) edges.push_back(&e);
  std::stable_sort(edges.begin(), edges.end(), [](const auto* a, const auto* b) { return a->from < b->from; });
  for (const auto* e : edges) {
    auto it = at.find(e->from);
    if (it == at.end() || e->from < from) continue;
    Poly label = e->label.is_var() ? variable(e->label.var) : constant(e->label.value);
    add_into(at[e->to], mul(it->second, label));
  }
  auto it = at.find(to);
  return it == at.end() ? Poly{} : it->second;
}

inline Poly abp_poly(const chasm::Abp& g) { return path_sum(g, g.source(), g.sink()); }

/// Permanent as the sum over permutations of a<i>_<sigma(i)> products.
inline Poly permanent(unsigned n) {
  std::vector<unsigned> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0u);
  Poly total;
  do {
    Monomial m;
    for (unsigned i = 0; i < n; ++i) m["a" + std::to_string(i + 1) + "_" + std::to_string(sigma[i] + 1)] += 1;
    add_into(total, Poly{{m, 1}});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

/// Entry (1,1) of the product of k symbolic n x n matrices.
inline Poly imm(unsigned n, unsigned k) {
  auto entry = [](unsigned l, unsigned i, unsigned j) {
    return variable("m" + std::to_string(l) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  };
  std::vector<std::vector<Poly>> acc(n, std::vector<Poly>(n));
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) acc[i][j] = entry(1, i, j);
  }
  for (unsigned l = 2; l <= k; ++l) {
    std::vector<std::vector<Poly>> next(n, std::vector<Poly>(n));
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned j = 0; j < n; ++j) {
        for (unsigned t = 0; t < n; ++t) add_into(next[i][j], mul(acc[i][t], entry(l, t, j)));
      }
    }
    acc = std::move(next);
  }
  return acc[0][0];
}

/// Weakly skew by graph cuts: removing the edge from child g to product p
/// must separate the sub-DAG below g (with outputs tied to an outside
/// vertex) from everything else.
inline bool weakly_skew(const chasm::Circuit& c) {
  const auto& gates = c.gates();
  const std::size_t world = gates.size();
  std::vector<std::multiset<std::size_t>> adj(gates.size() + 1);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (auto ch : gates[i].children) {
      std::size_t j = c.index_of(ch);
      adj[i].insert(j);
      adj[j].insert(i);
    }
  }
  for (auto o : c.outputs()) {
    adj[c.index_of(o)].insert(world);
    adj[world].insert(c.index_of(o));
  }
  auto below = [&](std::size_t g) {
    std::set<std::size_t> seen{g};
    std::vector<std::size_t> stack{g};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto ch : gates[v].children) {
        if (seen.insert(c.index_of(ch)).second) stack.push_back(c.index_of(ch));
      }
    }
    return seen;
  };
  auto separated = [&](std::size_t p, std::size_t g) {
    if (adj[g].count(p) != 1) return false;
    auto sub = below(g);
    std::set<std::size_t> seen{g};
    std::deque<std::size_t> queue{g};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v]) {
        if (v == g && w == p) continue;
        if (!sub.count(w)) return false;
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
    return true;
  };
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind != chasm::GateKind::Mul) continue;
    if (gates[i].children.size() != 2) return false;
    std::size_t a = c.index_of(gates[i].children[0]);
    std::size_t b = c.index_of(gates[i].children[1]);
    if (!separated(i, a) && !separated(i, b)) return false;
  }
  return true;
}

inline unsigned long formal_degree(const chasm::Circuit& c) {
  std::map<chasm::GateId, unsigned long> d;
  unsigned long top = 0;
  for (const auto& g : c.gates()) {
    unsigned long v = 1;
    if (g.kind == chasm::GateKind::Mul) {
      v = 0;
      for (auto ch : g.children) v += d.at(ch);
    } else if (!g.is_leaf()) {
      v = 0;
      for (auto ch : g.children) v = std::max(v, d.at(ch));
    }
    d[g.id] = v;
  }
  for (auto o : c.outputs()) top = std::max(top, d.at(o));
  return top;
}

inline unsigned long depth(const chasm::Circuit& c) {
  std::map<chasm::GateId, unsigned long> d;
  unsigned long top = 0;
  for (const auto& g : c.gates()) {
    unsigned long v = 0;
    for (auto ch : g.children) v = std::max(v, d.at(ch) + 1);
    d[g.id] = v;
    top = std::max(top, v);
  }
  return top;
}

/// Boolean value of the first output: Add = OR over nonzero-weight children,
/// Mul = AND, constants 0/1.
inline bool eval_bool(const chasm::Circuit& c, const std::map<std::string, bool>& at) {
  std::map<chasm::GateId, bool> v;
  for (const auto& g : c.gates()) {
    bool r = false;
    switch (g.kind) {
      case chasm::GateKind::Input: r = at.at(g.var); break;
      case chasm::GateKind::Const: r = g.value != 0; break;
      case chasm::GateKind::Add:
        for (std::size_t k = 0; k < g.children.size(); ++k) r = r || (g.weights[k] != 0 && v.at(g.children[k]));
        break;
      case chasm::GateKind::Sub: throw std::logic_error("subtraction in a boolean circuit");
      case chasm::GateKind::Mul:
        r = true;
        for (auto ch : g.children) r = r && v.at(ch);
        break;
    }
    v[g.id] = r;
  }
  return v.at(c.outputs().front());
}

inline std::vector<bool> truth_table(const chasm::Circuit& c, unsigned n) {
  std::vector<bool> rows;
  for (unsigned long row = 0; row < (1ul << n); ++row) {
    std::map<std::string, bool> at;
    for (unsigned i = 1; i <= n; ++i) {
      bool x = (row >> (i - 1)) & 1;
      at["x" + std::to_string(i)] = x;
      at["nx" + std::to_string(i)] = !x;
    }
    rows.push_back(eval_bool(c, at));
  }
  return rows;
}

/// Integer value of a variable-free circuit's first output.
inline BigInt eval_constant(const chasm::Circuit& c) {
  auto p = expand(c).front();
  return p.empty() ? BigInt(0) : p.begin()->second;
}

}  // namespace oracle
