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
#include <map>
#include <optional>
#include <utility>

#include "chasm/circuit.hpp"
#include "chasm/poly.hpp"
#include "chasm/report.hpp"

namespace chasm {

struct Transformed {
  Circuit circuit;
  PassReport report;
};

/// True when every Add gate is an ordinary (binary, unit-weight) addition;
/// Sub gates are allowed.
bool ordinary_additive(const Circuit& c);

/// Replaces subtraction by pair encoding: each gate g becomes (g+, g-) with
/// value(g) = value(g+) - value(g-); only the output difference is realized
/// with a multiplication by the constant -1. Identically absent components
/// are never materialized.
Transformed eliminate_subtractions(const Circuit& c);

enum class WeightAlgebra : std::uint8_t {
  Integer,
  /// Weights combine by OR; Sub gates and weights outside {0,1} are rejected.
  Boolean,
};

/// Collapses each maximal addition-only subcircuit that feeds a
/// multiplication (or an output) into one weighted Add over its leaf and
/// product inputs. Duplicate inputs are merged by summing weights; zero
/// weights are kept so formal degree is unchanged.
Transformed collapse_additions(const Circuit& c, WeightAlgebra algebra = WeightAlgebra::Integer);

enum class HomogenizeMode : std::uint8_t { Vp, Vp0 };

struct HomogenizeOptions {
  HomogenizeMode mode = HomogenizeMode::Vp;
  /// True degree of the output polynomial; computed by expansion if absent.
  std::optional<std::uint64_t> degree;
  std::uint64_t degree_limit = 4096;
  std::size_t cap = kDefaultMonomialCap;
};

struct Homogenized {
  Circuit circuit;
  PassReport report;
  /// (input gate id, i) -> gate computing the degree-i component.
  std::map<std::pair<GateId, std::uint64_t>, GateId> components;
  std::uint64_t target_degree = 0;
};

/// Rewrites a single-output circuit of binary Mul and unit-weight Add/Sub
/// gates so its formal degree equals the degree of the computed polynomial.
/// Degree-0 parts are never materialized: multiplication by them becomes a
/// unary weighted Add (Vp) or a doubling chain built from additions (Vp0),
/// and the constant term is re-added at the end.
Homogenized homogenize(const Circuit& c, const HomogenizeOptions& opts = {});

}  // namespace chasm
