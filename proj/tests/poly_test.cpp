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

#include <gtest/gtest.h>

#include "chasm/errors.hpp"
#include "chasm/poly.hpp"
#include "chasm/semiring.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace chasm;

namespace {

Circuit expanded_square() {
  Circuit c("expanded");
  GateId x = c.input("x");
  GateId y = c.input("y");
  GateId xx = c.mul(x, x);
  GateId xy = c.mul(x, y);
  GateId yy = c.mul(y, y);
  c.mark_output(c.add({xx, xy, yy}, {BigInt(1), BigInt(2), BigInt(1)}));
  return c;
}

}  // namespace

TEST(Expand, SquareOfSum) {
  auto p = expand_to_poly(fixtures::square_of_sum()).front();
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(oracle::from_sparse(p), oracle::expand(expanded_square()).front());
}

TEST(Expand, BranchingProgramPaths) {
  auto p = expand_to_poly(fixtures::a2());
  EXPECT_EQ(oracle::from_sparse(p), oracle::abp_poly(fixtures::a2()));
  EXPECT_EQ(p.degree(), 2);
}

TEST(Expand, RyserMatchesPermutationSum) {
  for (unsigned n = 1; n <= 5; ++n) {
    auto p = expand_to_poly(gen_ryser(n)).front();
    EXPECT_EQ(oracle::from_sparse(p), oracle::permanent(n)) << n;
  }
}

TEST(Expand, CapIsEnforced) {
  EXPECT_THROW(expand_to_poly(gen_ryser(4), 10), CapExceeded);
}

TEST(SparsePoly, Arithmetic) {
  std::vector<std::string> v{"x", "y"};
  auto x = SparsePoly::variable(v, "x");
  auto y = SparsePoly::variable(v, "y");
  auto p = (x + y) * (x - y);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p + SparsePoly::constant(v, 7)).constant_term(), 7);
  EXPECT_EQ(p.homogeneous_part(1).size(), 0u);
  std::vector<BigInt> at{BigInt(5), BigInt(3)};
  EXPECT_EQ(p.evaluate(at), 16);
}

TEST(Semiring, IntegerEvaluation) {
  Circuit c;
  GateId x = c.input("x");
  GateId y = c.input("y");
  c.mark_output(c.add({x, y}, {BigInt(1), BigInt(-2)}));
  Assignment<BigInt> at{{"x", 5}, {"y", 1}};
  EXPECT_EQ(eval_semiring(c, at, integer_ring()).front(), 3);
}

TEST(Semiring, BooleanEvaluation) {
  Circuit c;
  GateId x1 = c.input("x1");
  GateId x2 = c.input("x2");
  GateId x3 = c.input("x3");
  c.mark_output(c.add({c.mul(x1, x2), x3}));
  Assignment<bool> at{{"x1", true}, {"x2", false}, {"x3", true}};
  EXPECT_TRUE(eval_semiring(c, at, boolean_semiring()).front());
}

TEST(Semiring, SubtractionNeedsRing) {
  Assignment<bool> at{{"x", true}, {"y", false}};
  EXPECT_THROW(eval_semiring(fixtures::x_minus_y(), at, boolean_semiring()), StructureMismatch);
}

TEST(Semiring, PrimeFieldReduces) {
  auto f = prime_field();
  const std::uint64_t p = (std::uint64_t{1} << 61) - 1;
  EXPECT_EQ(f.mul(p - 1, p - 1), 1u);
  EXPECT_EQ(f.add(p - 1, 2), 1u);
  EXPECT_EQ(mod_mul(std::uint64_t{1} << 60, 4), 2u);
}

TEST(Semiring, AbpEvaluation) {
  Assignment<BigInt> at{{"x", 2}, {"y", 3}, {"z", 5}};
  EXPECT_EQ(eval_semiring(fixtures::a2(), at, integer_ring()), 11);
}

TEST(Equivalence, Exact) {
  EXPECT_TRUE(equiv_exact(fixtures::square_of_sum(), expanded_square()));
  Circuit prod;
  prod.mark_output(prod.mul(prod.input("x"), prod.input("y")));
  Circuit sum;
  sum.mark_output(sum.add({sum.input("x"), sum.input("y")}));
  EXPECT_FALSE(equiv_exact(prod, sum));
}

TEST(Equivalence, RandomAgrees) {
  auto v = equiv_random(fixtures::square_of_sum(), expanded_square(), 20, 7);
  EXPECT_TRUE(v.equivalent);
  EXPECT_EQ(v.trials, 20u);
  // (2/p)^20 with p = 2^61-1.
  EXPECT_LT(v.log2_failure_bound, -1000.0);
}

TEST(Equivalence, RandomFindsWitness) {
  Circuit a = gen_power(3);
  Circuit b = gen_power(3);
  GateId top = b.outputs().front();
  Circuit shifted("shifted");
  for (const auto& g : b.gates()) shifted.push(g);
  shifted.mark_output(shifted.add({top, shifted.constant(1)}));
  auto v = equiv_random(a, shifted, 20, 3);
  EXPECT_FALSE(v.equivalent);
  EXPECT_EQ(v.witness.size(), 1u);
}

TEST(Equivalence, RandomIsDeterministic) {
  auto a = equiv_random(gen_imm(2, 3), gen_imm(2, 3), 5, 11);
  auto b = equiv_random(gen_imm(2, 3), gen_imm(2, 3), 5, 11);
  EXPECT_EQ(a.equivalent, b.equivalent);
  EXPECT_EQ(a.log2_failure_bound, b.log2_failure_bound);
}

TEST(SymbolicPower, LoopPadsShortPaths) {
  LabeledMatrix m = abp_to_matrix(fixtures::a2());
  auto vars = fixtures::a2().variables();
  for (std::uint64_t p : {2u, 3u, 4u}) {
    auto pw = symbolic_power(m, p, vars);
    EXPECT_EQ(oracle::from_sparse(pw[0][2]), oracle::abp_poly(fixtures::a2())) << p;
  }
}
