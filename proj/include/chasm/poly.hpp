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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/bigint.hpp"
#include "chasm/circuit.hpp"

namespace chasm {

inline constexpr std::size_t kDefaultMonomialCap = 1'000'000;

/// Reads CHASM_MONOMIAL_CAP, falling back to kDefaultMonomialCap.
std::size_t monomial_cap_from_env();

/// Sparse multivariate polynomial with big-integer coefficients over a fixed
/// ordered variable list. Zero coefficients are never stored.
class SparsePoly {
 public:
  using Exponents = std::vector<std::uint32_t>;
  using Terms = std::map<Exponents, BigInt>;

  explicit SparsePoly(std::vector<std::string> vars = {});
  static SparsePoly constant(std::vector<std::string> vars, const BigInt& c);
  static SparsePoly variable(std::vector<std::string> vars, std::size_t index);
  /// Looks the variable up by name; throws if absent.
  static SparsePoly variable(std::vector<std::string> vars, const std::string& name);

  const std::vector<std::string>& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  std::int64_t degree() const;
  BigInt constant_term() const;
  SparsePoly homogeneous_part(std::uint64_t degree) const;

  void add_term(const Exponents& e, const BigInt& c);
  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly& scale(const BigInt& c);
  /// Product; throws CapExceeded(0, n) once the partial result exceeds `cap`.
  SparsePoly times(const SparsePoly& o, std::size_t cap = SIZE_MAX) const;

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) { return a.times(b); }
  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

  BigInt evaluate(std::span<const BigInt> point) const;

  /// One term per line: `<coeff> <e1> ... <ek>`, lexicographic by exponents.
  std::string to_text() const;

 private:
  void require_same_vars(const SparsePoly& o) const;

  std::vector<std::string> vars_;
  Terms terms_;
};

/// Expands every gate bottom-up (index = gate position). Throws CapExceeded
/// with the gate id when a gate's expansion exceeds `cap` monomials. An empty
/// `vars` means the circuit's own sorted variables.
std::vector<SparsePoly> expand_gates(const Circuit& c, std::size_t cap = kDefaultMonomialCap,
                                     std::vector<std::string> vars = {});

/// One polynomial per output, in output order.
std::vector<SparsePoly> expand_to_poly(const Circuit& c, std::size_t cap = kDefaultMonomialCap,
                                       std::vector<std::string> vars = {});

/// Per-node polynomials: sum over source-to-node paths (index node-1).
std::vector<SparsePoly> expand_abp_nodes(const Abp& g, std::size_t cap = kDefaultMonomialCap,
                                         std::vector<std::string> vars = {});
SparsePoly expand_to_poly(const Abp& g, std::size_t cap = kDefaultMonomialCap,
                          std::vector<std::string> vars = {});

/// Symbolic power of a labeled matrix by repeated multiplication.
std::vector<std::vector<SparsePoly>> symbolic_power(const LabeledMatrix& m, std::uint64_t p,
                                                    const std::vector<std::string>& vars,
                                                    std::size_t cap = kDefaultMonomialCap);

bool equiv_exact(const Circuit& a, const Circuit& b, std::size_t cap = kDefaultMonomialCap);
bool equiv_exact(const Circuit& a, const Abp& b, std::size_t cap = kDefaultMonomialCap);
bool equiv_exact(const Abp& a, const Abp& b, std::size_t cap = kDefaultMonomialCap);

inline constexpr std::uint64_t kIdentityPrime = 2305843009213693951ULL;  // 2^61 - 1

struct RandomVerdict {
  bool equivalent = true;
  std::size_t trials = 0;
  std::uint64_t degree_bound = 0;
  /// log2 of (D/p)^trials; the failure probability bound for Equivalent.
  double log2_failure_bound = 0.0;
  /// First distinguishing point (variable -> residue) when not equivalent.
  std::map<std::string, std::uint64_t> witness;
};

/// Schwartz-Zippel test modulo 2^61-1. `degree_bound` 0 means: use the
/// larger formal degree (circuits) or depth (branching programs).
RandomVerdict equiv_random(const Circuit& a, const Circuit& b, std::size_t trials, std::uint64_t seed,
                           std::uint64_t degree_bound = 0);
RandomVerdict equiv_random(const Circuit& a, const Abp& b, std::size_t trials, std::uint64_t seed,
                           std::uint64_t degree_bound = 0);

}  // namespace chasm
