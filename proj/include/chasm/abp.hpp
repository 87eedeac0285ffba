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
#include <string>
#include <string_view>
#include <vector>

#include "chasm/bigint.hpp"

namespace chasm {

using NodeId = std::uint32_t;

/// Edge label of a branching program: a variable or an integer constant.
struct Label {
  enum class Kind : std::uint8_t { Var, Const };
  Kind kind = Kind::Const;
  std::string var;
  BigInt value;

  static Label variable(std::string name) { return {Kind::Var, std::move(name), 0}; }
  static Label constant(BigInt v) { return {Kind::Const, {}, std::move(v)}; }
  bool is_var() const { return kind == Kind::Var; }

  friend bool operator==(const Label&, const Label&) = default;
};

struct AbpEdge {
  NodeId from = 0;
  NodeId to = 0;
  Label label;

  friend bool operator==(const AbpEdge&, const AbpEdge&) = default;
};

/// Arithmetic branching program over nodes 1..m in a fixed topological
/// numbering: node 1 is the source, node m the sink, and every edge goes
/// from a smaller to a larger node. The polynomial is the sum over source-
/// to-sink paths of the product of edge labels.
class Abp {
 public:
  Abp() = default;
  Abp(std::string name, NodeId nodes);

  /// The designated program with no source-to-sink path (polynomial 0).
  static Abp zero(std::string name = "zero");

  void add_edge(NodeId from, NodeId to, Label label);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  NodeId nodes() const { return nodes_; }
  NodeId source() const { return 1; }
  NodeId sink() const { return nodes_; }
  const std::vector<AbpEdge>& edges() const { return edges_; }
  std::vector<std::string> variables() const;

  friend bool operator==(const Abp&, const Abp&) = default;

 private:
  std::string name_ = "abp";
  NodeId nodes_ = 2;
  std::vector<AbpEdge> edges_;
};

/// A branching program whose polynomials are read at several nodes (the
/// multi-output form produced from multi-output weakly skew circuits).
struct MultiAbp {
  Abp abp;
  std::vector<NodeId> outputs;
};

struct AbpStats {
  NodeId size = 0;
  /// Longest source-to-sink path in edges; 0 when the sink is unreachable.
  std::uint64_t depth = 0;
  std::size_t edges = 0;
  bool trimmed = false;
};

AbpStats abp_stats(const Abp& g);

/// Longest path length from the source to each node (index node-1); -1 for
/// nodes the source does not reach.
std::vector<std::int64_t> node_depths(const Abp& g);

/// Removes nodes that lie on no source-to-sink path, keeping relative
/// order. Returns `Abp::zero` when the sink is unreachable.
Abp trim(const Abp& g);

Abp parse_abp(std::string_view text);
std::string emit_abp(const Abp& g);

struct MatrixEntry {
  enum class Kind : std::uint8_t { Zero, One, Var, Const };
  Kind kind = Kind::Zero;
  std::string var;
  BigInt value;

  bool is_zero() const { return kind == Kind::Zero; }
  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Square matrix of edge labels, row-major, 0-based storage.
class LabeledMatrix {
 public:
  explicit LabeledMatrix(std::size_t dim = 0) : dim_(dim), entries_(dim * dim) {}
  std::size_t dim() const { return dim_; }
  MatrixEntry& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const MatrixEntry& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

 private:
  std::size_t dim_;
  std::vector<MatrixEntry> entries_;
};

/// Adjacency labels of a trimmed program with a weight-one loop on the sink.
/// Parallel constant edges are summed; parallel variable edges are rejected.
LabeledMatrix abp_to_matrix(const Abp& g);

/// Adjacency labels plus the identity on the whole diagonal.
LabeledMatrix abp_to_matrix_with_identity(const Abp& g);

}  // namespace chasm
