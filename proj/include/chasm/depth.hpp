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
#include <optional>
#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/circuit.hpp"
#include "chasm/normalize.hpp"
#include "chasm/poly.hpp"
#include "chasm/report.hpp"

namespace chasm {

enum class Target : std::uint8_t { Depth4Circuit, Depth4Formula, Depth2Delta, Polylog, BooleanConstantDepth };

struct VerifyConfig {
  enum class Kind : std::uint8_t { None, Exact, Random };
  Kind kind = Kind::None;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::size_t cap = kDefaultMonomialCap;
};

struct PipelineConfig {
  Target target = Target::Depth4Circuit;
  unsigned delta = 2;
  bool prune_zero_terms = true;
  VerifyConfig verify;
};

struct AbpResult {
  Abp abp;
  PassReport report;
};

struct MultiAbpResult {
  MultiAbp abp;
  PassReport report;
};

/// Every binary multiplication privatizes its child of smaller formal
/// degree: that child's sub-DAG is copied into a fresh region shared with
/// nothing else, recursively. Runs collapse_additions first when some
/// addition is fed by another addition.
Transformed to_weakly_skew(const Circuit& c);

/// Weakly skew circuit with additions fed only by products or leaves ->
/// ABP whose sink computes the (single) output.
AbpResult weakly_skew_to_abp(const Circuit& c);

/// Same construction; `outputs[k]` is the node computing output k. The
/// program is not trimmed.
MultiAbpResult weakly_skew_to_multi_abp(const Circuit& c);

/// collapse_additions -> to_weakly_skew -> weakly_skew_to_abp -> trim.
AbpResult circuit_to_abp(const Circuit& c);

enum class Depth4Mode : std::uint8_t { Circuit, Formula };

/// Computes (M^(q*q))_{1,m} for the sink-looped adjacency matrix M with two
/// depth-2 brute-force powering layers, q = ceil(sqrt(depth)).
Transformed abp_to_depth4(const Abp& g, Depth4Mode mode, bool prune_zero_terms = true);

/// Delta cascaded depth-2 powering stages with exponent r each, r the least
/// integer with r^Delta >= depth.
Transformed abp_to_depth_2delta(const Abp& g, unsigned delta, bool prune_zero_terms = true);

/// One output per node j: the sum over all paths from node 1 to j, read
/// off row 1 of U_P = I + M + ... + M^P, P = 2^ceil(log2 depth), built by
/// ceil(log2 depth) doubling stages of depth 2.
Transformed abp_to_logdepth(const Abp& g);

Transformed reduce_to_depth4(const Circuit& c, const PipelineConfig& cfg);

/// Degree-layered reduction: each layer of gates with formal degree in
/// [2^i, 2^(i+1)) is skew over the lower layers and is turned into a
/// log-depth block.
Transformed reduce_to_polylog(const Circuit& c, const VerifyConfig& verify = {});

/// Circuit over the boolean semiring (Add = OR, Mul = AND) on literals
/// x1..xn, nx1..nxn -> depth <= 2*Delta circuit with the same truth table.
Transformed reduce_boolean(const Circuit& c, unsigned delta, const VerifyConfig& verify = {});

/// Literal names for the complementary-literal convention.
std::vector<std::string> boolean_literals(unsigned n);

/// Largest literal index in use; throws for names outside the convention.
unsigned boolean_literal_count(const Circuit& c);

/// Entry r is the output under x_i = bit (i-1) of r and nx_i = not x_i.
std::vector<bool> truth_table(const Circuit& c, unsigned n);

/// Smallest integer r with r^k >= x (x >= 1, k >= 1).
std::uint64_t integer_root_ceil(std::uint64_t x, unsigned k);
std::uint64_t ceil_log2(std::uint64_t x);

}  // namespace chasm
