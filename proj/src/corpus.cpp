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

#include "chasm/corpus.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include "chasm/errors.hpp"

namespace chasm {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionViolated("gen_corpus: " + what);
}

}  // namespace

Circuit gen_ryser(unsigned n) {
  require(n >= 1 && n <= 12, "ryser needs 1 <= n <= 12");
  Circuit c("ryser" + std::to_string(n));
  std::vector<std::vector<GateId>> a(n, std::vector<GateId>(n));
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) a[i][j] = c.input("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  }
  std::vector<GateId> terms;
  std::vector<BigInt> signs;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::vector<GateId> rows;
    for (unsigned i = 0; i < n; ++i) {
      std::vector<GateId> cols;
      for (unsigned j = 0; j < n; ++j) {
        if (s & (1u << j)) cols.push_back(a[i][j]);
      }
      rows.push_back(cols.size() == 1 ? cols.front() : c.add(std::move(cols)));
    }
    terms.push_back(n == 1 ? rows.front() : c.mul(std::move(rows)));
    const int size = __builtin_popcount(s);
    signs.push_back((n - size) % 2 == 0 ? 1 : -1);
  }
  c.mark_output(c.add(std::move(terms), std::move(signs)));
  return c;
}

Circuit gen_imm(unsigned n, unsigned k) {
  require(n >= 1 && k >= 1, "imm needs n >= 1 and k >= 1");
  Circuit c("imm" + std::to_string(n) + "x" + std::to_string(k));
  auto var = [&](unsigned l, unsigned i, unsigned j) {
    return c.input("m" + std::to_string(l) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  };
  // Row 1 of the running product.
  std::vector<GateId> row;
  for (unsigned j = 0; j < (k == 1 ? 1u : n); ++j) row.push_back(var(1, 0, j));
  for (unsigned l = 2; l <= k; ++l) {
    const unsigned cols = l == k ? 1 : n;
    std::vector<GateId> next;
    for (unsigned j = 0; j < cols; ++j) {
      std::optional<GateId> acc;
      for (unsigned i = 0; i < n; ++i) {
        GateId p = c.mul(row[i], var(l, i, j));
        acc = acc ? c.add({*acc, p}) : p;
      }
      next.push_back(*acc);
    }
    row = std::move(next);
  }
  c.mark_output(row.front());
  return c;
}

Circuit gen_power(unsigned k) {
  require(k <= 62, "power needs k <= 62");
  Circuit c("power" + std::to_string(k));
  GateId g = c.input("x");
  for (unsigned i = 0; i < k; ++i) g = c.mul(g, g);
  c.mark_output(g);
  return c;
}

Circuit gen_const_chain(unsigned k) {
  require(k <= 20, "const_chain needs k <= 20");
  Circuit c("const_chain" + std::to_string(k));
  GateId one = c.constant(1);
  GateId g = c.add({one, one});
  for (unsigned i = 0; i < k; ++i) g = c.mul(g, g);
  c.mark_output(g);
  return c;
}

Circuit gen_random(unsigned vars, unsigned size, unsigned max_degree, std::uint64_t seed) {
  require(vars >= 1, "random needs vars >= 1");
  require(size >= vars, "random needs size >= vars");
  require(max_degree >= 1, "random needs max_degree >= 1");
  std::mt19937_64 rng(seed);
  Circuit c("random_v" + std::to_string(vars) + "_s" + std::to_string(size) + "_d" + std::to_string(max_degree) +
            "_" + std::to_string(seed));
  std::vector<GateId> ids;
  std::vector<std::uint64_t> deg;
  std::vector<bool> used;
  for (unsigned v = 1; v <= vars; ++v) {
    ids.push_back(c.input("x" + std::to_string(v)));
    deg.push_back(1);
    used.push_back(false);
  }
  if (ids.size() < size && rng() % 3 == 0) {
    ids.push_back(c.constant(static_cast<long>(rng() % 3) - 1));
    deg.push_back(1);
    used.push_back(false);
  }
  auto pick = [&]() -> std::size_t {
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!used[i]) fresh.push_back(i);
    }
    if (!fresh.empty() && rng() % 2 == 0) return fresh[rng() % fresh.size()];
    return rng() % ids.size();
  };
  while (ids.size() < size) {
    const unsigned op = rng() % 10;
    std::size_t a = pick();
    std::size_t b = pick();
    GateId g;
    std::uint64_t d;
    if (op >= 6) {
      // Reject products that would exceed the degree cap; fall back to a sum.
      bool ok = deg[a] + deg[b] <= max_degree;
      for (int attempt = 0; !ok && attempt < 8; ++attempt) {
        a = pick();
        b = pick();
        ok = deg[a] + deg[b] <= max_degree;
      }
      if (ok) {
        g = c.mul(ids[a], ids[b]);
        d = deg[a] + deg[b];
      } else {
        g = c.add({ids[a], ids[b]});
        d = std::max(deg[a], deg[b]);
      }
    } else if (op >= 4) {
      g = c.sub(ids[a], ids[b]);
      d = std::max(deg[a], deg[b]);
    } else {
      g = c.add({ids[a], ids[b]});
      d = std::max(deg[a], deg[b]);
    }
    used[a] = used[b] = true;
    ids.push_back(g);
    deg.push_back(d);
    used.push_back(false);
  }
  c.mark_output(ids.back());
  return prune_dead(c);
}

Circuit gen_bool_reach(unsigned nodes, std::uint64_t seed) {
  require(nodes >= 2 && nodes <= 16, "bool_reach needs 2 <= nodes <= 16");
  std::mt19937_64 rng(seed);
  Circuit c("bool_reach" + std::to_string(nodes) + "_" + std::to_string(seed));
  // Entry values: nullopt = constant false; diagonal is constant true.
  using Entry = std::optional<GateId>;
  std::vector<std::vector<Entry>> r(nodes, std::vector<Entry>(nodes));
  unsigned literals = 0;
  for (unsigned i = 0; i < nodes; ++i) {
    for (unsigned j = i + 1; j < nodes; ++j) {
      if (literals < 10 && rng() % 3 != 0) {
        ++literals;
        const bool negated = rng() % 4 == 0;
        r[i][j] = c.input((negated ? "nx" : "x") + std::to_string(literals));
      }
    }
  }
  unsigned rounds = 0;
  while ((1u << rounds) < nodes - 1) ++rounds;

  // Entries reachable in the result decide what each round must compute.
  std::vector<std::vector<std::vector<char>>> live(rounds + 1,
                                                   std::vector<std::vector<char>>(nodes, std::vector<char>(nodes, 0)));
  auto nonzero = [&](const std::vector<std::vector<Entry>>& m, unsigned i, unsigned j) { return i == j || m[i][j]; };
  std::vector<std::vector<std::vector<char>>> pat(rounds + 1,
                                                  std::vector<std::vector<char>>(nodes, std::vector<char>(nodes, 0)));
  for (unsigned i = 0; i < nodes; ++i) {
    for (unsigned j = 0; j < nodes; ++j) pat[0][i][j] = nonzero(r, i, j);
  }
  for (unsigned s = 1; s <= rounds; ++s) {
    for (unsigned i = 0; i < nodes; ++i) {
      for (unsigned k = 0; k < nodes; ++k) {
        if (!pat[s - 1][i][k]) continue;
        for (unsigned j = 0; j < nodes; ++j) pat[s][i][j] |= pat[s - 1][k][j];
      }
    }
  }
  live[rounds][0][nodes - 1] = 1;
  for (unsigned s = rounds; s > 0; --s) {
    for (unsigned i = 0; i < nodes; ++i) {
      for (unsigned j = 0; j < nodes; ++j) {
        if (!live[s][i][j] || i == j) continue;
        for (unsigned k = 0; k < nodes; ++k) {
          if (pat[s - 1][i][k] && pat[s - 1][k][j]) live[s - 1][i][k] = live[s - 1][k][j] = 1;
        }
      }
    }
  }
  for (unsigned s = 1; s <= rounds; ++s) {
    std::vector<std::vector<Entry>> next(nodes, std::vector<Entry>(nodes));
    for (unsigned i = 0; i < nodes; ++i) {
      for (unsigned j = 0; j < nodes; ++j) {
        if (i == j || !live[s][i][j]) continue;
        std::vector<GateId> terms;
        for (unsigned k = 0; k < nodes; ++k) {
          if (!nonzero(r, i, k) || !nonzero(r, k, j)) continue;
          if (k == i) terms.push_back(*r[k][j]);
          else if (k == j) terms.push_back(*r[i][k]);
          else terms.push_back(c.mul(*r[i][k], *r[k][j]));
        }
        if (terms.empty()) continue;
        next[i][j] = terms.size() == 1 ? terms.front() : c.add(std::move(terms));
      }
    }
    r = std::move(next);
  }
  c.mark_output(r[0][nodes - 1] ? *r[0][nodes - 1] : c.constant(0));
  return prune_dead(c);
}

Circuit gen_corpus(const CorpusSpec& s) {
  switch (s.family) {
    case CorpusSpec::Family::Ryser: return gen_ryser(s.n);
    case CorpusSpec::Family::Imm: return gen_imm(s.n, s.k);
    case CorpusSpec::Family::Power: return gen_power(s.k);
    case CorpusSpec::Family::Random: return gen_random(s.vars, s.size, s.max_degree, s.seed);
    case CorpusSpec::Family::BoolReach: return gen_bool_reach(s.nodes, s.seed);
    case CorpusSpec::Family::ConstChain: return gen_const_chain(s.k);
  }
  throw PreconditionViolated("gen_corpus: unknown family");
}

}  // namespace chasm
