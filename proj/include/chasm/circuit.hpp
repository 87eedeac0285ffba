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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chasm/bigint.hpp"

namespace chasm {

using GateId = std::uint32_t;

enum class GateKind : std::uint8_t { Input, Const, Add, Sub, Mul };

std::string_view kind_name(GateKind kind);

/// One gate of an arithmetic circuit. Which payload fields are meaningful
/// depends on `kind`: `var` for Input, `value` for Const, `children` for the
/// arithmetic kinds and `weights` (parallel to `children`) for Add.
struct Gate {
  GateId id = 0;
  GateKind kind = GateKind::Input;
  std::string var;
  BigInt value;
  std::vector<GateId> children;
  std::vector<BigInt> weights;

  bool is_leaf() const { return kind == GateKind::Input || kind == GateKind::Const; }
  bool is_additive() const { return kind == GateKind::Add || kind == GateKind::Sub; }
  /// Binary Add with both weights equal to one.
  bool is_ordinary_add() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// A DAG of gates stored in a definition-before-use order. Gate ids are
/// unique and arbitrary; the builder methods hand out `max id + 1`.
class Circuit {
 public:
  explicit Circuit(std::string name = "circuit");

  GateId input(std::string var);
  GateId constant(BigInt value);
  /// Weighted addition. Missing weights default to one.
  GateId add(std::vector<GateId> children, std::vector<BigInt> weights = {});
  GateId sub(GateId left, GateId right);
  GateId mul(std::vector<GateId> children);
  GateId mul(GateId left, GateId right) { return mul(std::vector<GateId>{left, right}); }

  /// Appends a fully specified gate; validates id uniqueness, arity and
  /// that every child is already defined.
  GateId push(Gate gate);
  void mark_output(GateId id);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<GateId>& outputs() const { return outputs_; }
  std::size_t size() const { return gates_.size(); }
  bool contains(GateId id) const { return index_.count(id) != 0; }
  std::size_t index_of(GateId id) const;
  const Gate& gate(GateId id) const { return gates_[index_of(id)]; }
  GateId next_id() const { return next_id_; }

  /// Sorted, de-duplicated variable names.
  std::vector<std::string> variables() const;

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.name_ == b.name_ && a.gates_ == b.gates_ && a.outputs_ == b.outputs_;
  }

 private:
  std::string name_;
  std::vector<Gate> gates_;
  std::vector<GateId> outputs_;
  std::unordered_map<GateId, std::size_t> index_;
  GateId next_id_ = 1;
};

/// Index-based adjacency (positions in `Circuit::gates()`), with edge
/// multiplicity preserved in both directions.
struct Topology {
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<std::size_t>> consumers;
  std::vector<std::size_t> outputs;
  std::vector<bool> is_output;
};

Topology topology(const Circuit& c);

Circuit parse_circuit(std::string_view text);
std::string emit_circuit(const Circuit& c);

/// Per-gate formal degree indexed by position: leaves 1, Add/Sub max, Mul sum.
/// Saturates at UINT64_MAX.
std::vector<std::uint64_t> gate_degrees(const Circuit& c);
std::unordered_map<GateId, std::uint64_t> formal_degree_map(const Circuit& c);
/// Maximum formal degree over the outputs.
std::uint64_t formal_degree(const Circuit& c);

/// Per-gate depth (edges on the longest path from a leaf), by position.
std::vector<std::uint64_t> gate_depths(const Circuit& c);
std::uint64_t circuit_depth(const Circuit& c);

struct CircuitStats {
  std::size_t size = 0;
  std::uint64_t depth = 0;
  std::uint64_t formal_degree = 0;
  std::size_t num_inputs = 0;
  std::size_t num_consts = 0;
  std::size_t num_adds = 0;
  std::size_t num_subs = 0;
  std::size_t num_muls = 0;
  std::size_t max_mul_fanin = 0;
  std::size_t max_add_fanin = 0;
  BigInt max_abs_constant;
  BigInt max_add_total_weight;
};

CircuitStats circuit_stats(const Circuit& c);

enum class ShapeSpec : std::uint8_t {
  OrdinaryAdditionsOnly,
  BinaryMultiplicationsOnly,
  InputFanoutAtMostOne,
  ConstantFree,
  WeaklySkew,
  Skew,
  AddFeedsOnlyMul,
  Depth4SigmaPiSigmaPi,
  SemiUnbounded,
};

std::string_view shape_name(ShapeSpec spec);

struct ShapeVerdict {
  ShapeSpec spec;
  bool ok = true;
  std::optional<GateId> witness;
  std::string reason;
};

ShapeVerdict check_shape(const Circuit& c, ShapeSpec spec);
std::vector<ShapeVerdict> check_shapes(const Circuit& c, const std::vector<ShapeSpec>& specs);

/// For every gate position: for binary Mul gates, the child slot (0 or 1)
/// whose sub-DAG touches the rest of the circuit only through the edge into
/// that Mul. Slot 1 is preferred when both qualify. Empty for other gates
/// and for Muls with no independent child.
std::vector<std::optional<int>> independent_children(const Circuit& c);

/// Duplicates input/const gates so that every leaf has fan-out at most one.
/// Returns the circuit unchanged when no leaf is shared; otherwise gates are
/// renumbered 1..n in their new order.
Circuit normalize_leaf_fanout(const Circuit& c);

/// Rewrites n-ary products into left-leaning binary chains and weighted
/// additions into ordinary Add/Sub trees (weights realized by doubling), so
/// the result has only binary Mul, ordinary Add and Sub gates. Introduces no
/// constants other than 0, so constant-freeness is preserved.
Circuit lower_to_binary(const Circuit& c);

/// Drops gates that no output depends on. Ids are kept.
Circuit prune_dead(const Circuit& c);

}  // namespace chasm
