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
#include <string>
#include <vector>

#include "chasm/circuit.hpp"

namespace chasm {

struct CorpusSpec {
  enum class Family : std::uint8_t { Ryser, Imm, Power, Random, BoolReach, ConstChain };
  Family family = Family::Power;
  unsigned n = 2;
  unsigned k = 1;
  unsigned vars = 2;
  unsigned size = 8;
  unsigned max_degree = 4;
  unsigned nodes = 4;
  std::uint64_t seed = 1;
};

/// Depth-3 inclusion-exclusion formula for the n x n permanent over
/// variables a<i>_<j>; products are n-ary.
Circuit gen_ryser(unsigned n);

/// Entry (1,1) of A_1 ... A_k for n x n matrices of variables m<l>_<i>_<j>.
Circuit gen_imm(unsigned n, unsigned k);

/// x squared k times.
Circuit gen_power(unsigned k);

/// Constant 2 squared k times: a variable-free, constant-free chain.
Circuit gen_const_chain(unsigned k);

/// Seeded DAG over x1..x<vars> with binary products, ordinary additions and
/// subtractions, formal degree at most max_degree; dead gates are removed.
Circuit gen_random(unsigned vars, unsigned size, unsigned max_degree, std::uint64_t seed);

/// Reachability from the first to the last of `nodes` vertices by repeated
/// squaring; each potential edge i<j is a literal x<e> or nx<e> or absent.
Circuit gen_bool_reach(unsigned nodes, std::uint64_t seed);

Circuit gen_corpus(const CorpusSpec& spec);

}  // namespace chasm
