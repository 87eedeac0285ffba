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

#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/circuit.hpp"
#include "chasm/corpus.hpp"

namespace fixtures {

using namespace chasm;

// s -> t : x
inline Abp a1() {
  Abp g("A1", 2);
  g.add_edge(1, 2, Label::variable("x"));
  return g;
}

// s -> v : x, v -> t : y, s -> t : z
inline Abp a2() {
  Abp g("A2", 3);
  g.add_edge(1, 2, Label::variable("x"));
  g.add_edge(2, 3, Label::variable("y"));
  g.add_edge(1, 3, Label::variable("z"));
  return g;
}

// (x+y)^2 with one shared addition.
inline Circuit square_of_sum() {
  Circuit c("square_of_sum");
  GateId x = c.input("x");
  GateId y = c.input("y");
  GateId s = c.add({x, y});
  c.mark_output(c.mul(s, s));
  return c;
}

inline Circuit x_minus_y() {
  Circuit c("x_minus_y");
  GateId x = c.input("x");
  GateId y = c.input("y");
  c.mark_output(c.sub(x, y));
  return c;
}

struct Instance {
  Circuit circuit;
  std::string family;
};

/// Random family settings: parameters cycle with the seed within
/// vars <= 4, size <= 40, degree <= 10, plus the extreme setting.
inline std::vector<Instance> random_instances(unsigned seeds = 150) {
  std::vector<Instance> out;
  for (unsigned s = 1; s <= seeds; ++s) {
    unsigned vars = 1 + s % 4;
    unsigned size = std::max(vars, 6 + s % 35);
    unsigned degree = 2 + s % 9;
    out.push_back({gen_random(vars, size, degree, s), "random"});
    out.push_back({gen_random(4, 40, 10, 1000 + s), "random"});
  }
  return out;
}

/// Arithmetic corpus: binary products throughout (Ryser is lowered).
inline std::vector<Instance> arithmetic_corpus(unsigned seeds = 150) {
  std::vector<Instance> out = random_instances(seeds);
  for (unsigned n = 2; n <= 4; ++n) out.push_back({lower_to_binary(gen_ryser(n)), "ryser"});
  for (unsigned k = 2; k <= 4; ++k) out.push_back({gen_imm(2, k), "imm"});
  for (unsigned k = 1; k <= 4; ++k) out.push_back({gen_power(k), "power"});
  return out;
}

/// Boolean reachability instances with at least one literal.
inline std::vector<Circuit> boolean_corpus(std::size_t want = 24) {
  std::vector<Circuit> out;
  for (std::uint64_t seed = 1; out.size() < want; ++seed) {
    for (unsigned nodes = 4; nodes <= 6 && out.size() < want; ++nodes) {
      Circuit c = gen_bool_reach(nodes, seed);
      if (!c.variables().empty()) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace fixtures
