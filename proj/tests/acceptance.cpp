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

// Acceptance sweep: one PASS/FAIL line per criterion. Reference values come
// from the naive expanders in oracle.hpp; bounds are recomputed here rather
// than read back from the pass reports.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/circuit.hpp"
#include "chasm/corpus.hpp"
#include "chasm/depth.hpp"
#include "chasm/errors.hpp"
#include "chasm/normalize.hpp"
#include "chasm/poly.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace chasm;
using oracle::Poly;

namespace {

// Real-valued bounds are compared after scaling them up by this factor.
constexpr long double kOutward = 1.0L + 1e-9L;
constexpr double kSweepSeconds = 120.0;
constexpr double kBooleanSeconds = 60.0;
constexpr unsigned kRandomSeeds = 150;
constexpr std::size_t kBooleanCircuits = 24;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Tally {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& where, const std::string& what) {
    ++checked;
    if (!ok) failures.push_back(where + ": " + what);
  }
};

struct Line {
  int id;
  std::string title;
  bool ok;
  std::string detail;
};

std::vector<Line> lines;

void finish(int id, const std::string& title, const Tally& t, std::string extra = {}, bool extra_ok = true) {
  std::ostringstream d;
  d << t.checked << " checks";
  if (t.skipped) d << ", " << t.skipped << " out of domain";
  if (!extra.empty()) d << ", " << extra;
  if (!t.failures.empty()) {
    d << "; " << t.failures.size() << " failed, first: " << t.failures.front();
  }
  lines.push_back({id, title, t.failures.empty() && t.checked > 0 && extra_ok, d.str()});
}

std::string bstr(const BigInt& v) { return v.get_str(); }

unsigned long ceil_lg(unsigned long x) {
  unsigned long k = 0;
  while ((1ul << k) < x) ++k;
  return k;
}

unsigned long floor_lg(unsigned long x) {
  unsigned long k = 0;
  while ((2ul << k) <= x) ++k;
  return k;
}

unsigned long ceil_sqrt(unsigned long x) {
  unsigned long r = 0;
  while (r * r < x) ++r;
  return r;
}

BigInt ipow(unsigned long b, unsigned long e) {
  BigInt r = 1;
  for (unsigned long i = 0; i < e; ++i) r *= b;
  return r;
}

// observed <= bound for a real bound given by log2(bound - slack) with an
// integer slack, compared in long double and widened outward.
bool below_pow_plus(const BigInt& observed, long double log2_base_power, long double slack) {
  long double bound = std::exp2(log2_base_power) + slack;
  return observed.get_d() <= static_cast<double>(bound * kOutward);
}

unsigned long abp_depth(const Abp& g) {
  std::vector<long> far(g.nodes() + 1, -1);
  far[g.source()] = 0;
  for (NodeId v = 1; v <= g.nodes(); ++v) {
    if (far[v] < 0) continue;
    for (const auto& e : g.edges()) {
      if (e.from == v) far[e.to] = std::max(far[e.to], far[v] + 1);
    }
  }
  return far[g.sink()] < 0 ? 0 : static_cast<unsigned long>(far[g.sink()]);
}

struct Counts {
  std::size_t adds = 0, muls = 0, subs = 0, max_mul_fanin = 0, min_mul_fanin = SIZE_MAX;
  BigInt max_const = 0, max_weight = 0;
  bool constants_small = true;
};

Counts count(const Circuit& c) {
  Counts k;
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Add: {
        ++k.adds;
        BigInt w = 0;
        for (const auto& x : g.weights) w += abs(x);
        if (w > k.max_weight) k.max_weight = w;
        break;
      }
      case GateKind::Sub: ++k.subs; break;
      case GateKind::Mul:
        ++k.muls;
        k.max_mul_fanin = std::max(k.max_mul_fanin, g.children.size());
        k.min_mul_fanin = std::min(k.min_mul_fanin, g.children.size());
        break;
      case GateKind::Const:
        if (abs(g.value) > k.max_const) k.max_const = abs(g.value);
        if (abs(g.value) > 1) k.constants_small = false;
        break;
      case GateKind::Input: break;
    }
  }
  return k;
}

bool adds_feed_only_products(const Circuit& c) {
  std::map<GateId, GateKind> kind;
  for (const auto& g : c.gates()) kind[g.id] = g.kind;
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::Add && g.kind != GateKind::Sub) continue;
    for (GateId ch : g.children) {
      if (kind[ch] == GateKind::Add || kind[ch] == GateKind::Sub) return false;
    }
  }
  return true;
}

bool ordinary(const Circuit& c) {
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::Add) continue;
    if (g.children.size() != 2) return false;
    for (const auto& w : g.weights) {
      if (w != 1) return false;
    }
  }
  return true;
}

bool has_sub(const Circuit& c) { return count(c).subs > 0; }

// Structure of a depth-4 output: every input-to-output path reads, from the
// top, Sigma Pi Sigma Pi with layers possibly skipped.
bool sigma_pi_sigma_pi(const Circuit& c) {
  std::map<GateId, int> level;
  for (const auto& g : c.gates()) {
    int want = 0;
    for (GateId ch : g.children) want = std::max(want, level.at(ch));
    int lv = 0;
    if (g.kind == GateKind::Mul) lv = want < 1 ? 1 : want < 3 ? 3 : 99;
    else if (g.kind == GateKind::Add) lv = want < 2 ? 2 : want < 4 ? 4 : 99;
    else if (g.kind == GateKind::Sub) lv = 99;
    level[g.id] = lv;
  }
  for (GateId o : c.outputs()) {
    if (level.at(o) > 4) return false;
  }
  return true;
}

// Random variable-free circuits over {-1, 0, 1} with binary gates.
Circuit constant_circuit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Circuit c("constants_" + std::to_string(seed));
  std::vector<GateId> ids;
  const int leaves = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < leaves; ++i) ids.push_back(c.constant(static_cast<long>(rng() % 3) - 1));
  const int inner = 2 + static_cast<int>(rng() % 12);
  for (int i = 0; i < inner; ++i) {
    GateId a = ids[rng() % ids.size()];
    GateId b = ids[rng() % ids.size()];
    switch (rng() % 3) {
      case 0: ids.push_back(c.add({a, b})); break;
      case 1: ids.push_back(c.sub(a, b)); break;
      default: ids.push_back(c.mul(a, b)); break;
    }
  }
  c.mark_output(ids.back());
  return prune_dead(c);
}

template <class F>
bool no_throw(Tally& t, const std::string& where, F&& f) {
  try {
    f();
    return true;
  } catch (const std::exception& e) {
    t.expect(false, where, std::string("threw: ") + e.what());
    return false;
  }
}

}  // namespace

int main() {
  Tally equiv, elim, collapse, toabp, power, counts, pipeline, logdepth, constsize, boolean, homog;

  const auto t0 = Clock::now();
  std::size_t circuits = 0;
  std::vector<Abp> abps;

  for (const auto& inst : fixtures::arithmetic_corpus(kRandomSeeds)) {
    const Circuit& c = inst.circuit;
    const std::string name = inst.family + ":" + c.name();
    ++circuits;
    const Poly ref = oracle::expand(c).front();
    const unsigned long t = c.size();
    const unsigned long d = oracle::formal_degree(c);
    const long true_degree = oracle::degree(ref);
    const bool is_ordinary = ordinary(c);
    const bool small_constants = count(c).constants_small;
    auto same = [&](const Circuit& out, const std::string& what) {
      equiv.expect(oracle::expand(out).front() == ref, name, what + " changed the polynomial");
    };

    // Subtraction elimination.
    if (is_ordinary && small_constants) {
      no_throw(equiv, name, [&] {
        Transformed e = eliminate_subtractions(c);
        same(e.circuit, "eliminate_subtractions");
        Counts k = count(e.circuit);
        if (has_sub(c)) {
          elim.expect(e.circuit.size() <= 6 * t + 3, name,
                       "size " + std::to_string(e.circuit.size()) + " > 6t+3 = " + std::to_string(6 * t + 3));
          elim.expect(oracle::formal_degree(e.circuit) <= d + 1, name, "formal degree above d+1");
          elim.expect(k.subs == 0 && ordinary(e.circuit) && k.constants_small, name, "output not sub-free/constant-free");
        }
      });
    } else if (has_sub(c)) {
      ++elim.skipped;
    }

    // Collapse.
    Circuit collapsed;
    if (no_throw(equiv, name, [&] { collapsed = collapse_additions(c).circuit; })) {
      same(collapsed, "collapse_additions");
      collapse.expect(oracle::formal_degree(collapsed) == d, name, "formal degree changed");
      collapse.expect(adds_feed_only_products(collapsed), name, "an addition feeds an addition");
      if (is_ordinary) {
        BigInt limit = pow2(t);
        BigInt w = count(collapsed).max_weight;
        collapse.expect(w <= limit, name, "total weight " + bstr(w) + " > 2^" + std::to_string(t));
      }
    }

    // Weakly skew form.
    no_throw(equiv, name, [&] {
      Transformed w = to_weakly_skew(c);
      same(w.circuit, "to_weakly_skew");
      equiv.expect(oracle::weakly_skew(w.circuit), name, "to_weakly_skew output is not weakly skew");
    });

    // Circuit to ABP.
    Abp abp;
    if (no_throw(equiv, name, [&] { abp = circuit_to_abp(c).abp; })) {
      equiv.expect(oracle::abp_poly(abp) == ref, name, "circuit_to_abp changed the polynomial");
      const long double lg = std::log2(static_cast<long double>(2 * d)) * std::log2(static_cast<long double>(t));
      toabp.expect(below_pow_plus(BigInt(static_cast<unsigned long>(abp.nodes())), lg, 1.0L), name,
                   "size " + std::to_string(abp.nodes()) + " above t^log2(2d)+1");
      const unsigned long depth = abp_depth(abp);
      toabp.expect(depth <= 3 * d - 1, name, "depth " + std::to_string(depth) + " > 3d-1");
      if (is_ordinary && small_constants) {
        BigInt limit = pow2(t);
        for (const auto& e : abp.edges()) {
          if (!e.label.is_var() && abs(e.label.value) > limit) {
            toabp.expect(false, name, "constant label " + bstr(e.label.value) + " > 2^t");
          }
        }
        ++toabp.checked;
      }
      abps.push_back(abp);
    }

    // Full pipelines.
    for (auto target : {Target::Depth4Circuit, Target::Depth4Formula}) {
      const bool formula = target == Target::Depth4Formula;
      const std::string label = formula ? "reduce_to_depth4[formula]" : "reduce_to_depth4[circuit]";
      no_throw(equiv, name, [&] {
        PipelineConfig cfg;
        cfg.target = target;
        Transformed r = reduce_to_depth4(c, cfg);
        same(r.circuit, label);
        const bool fast = oracle::weakly_skew(c) && oracle::weakly_skew(collapsed);
        const long double lgT = fast ? std::log2(static_cast<long double>(t + 1))
                                     : std::log2(std::exp2(std::log2(static_cast<long double>(2 * d)) *
                                                           std::log2(static_cast<long double>(t))) + 1.0L);
        const long double s3d = std::sqrt(static_cast<long double>(3 * d));
        Counts k = count(r.circuit);
        if (!formula) {
          pipeline.expect(below_pow_plus(BigInt(static_cast<unsigned long>(k.adds)), 2 * lgT, 1.0L), name,
                          label + " additions " + std::to_string(k.adds) + " > T^2+1");
          pipeline.expect(below_pow_plus(BigInt(static_cast<unsigned long>(k.muls)), 1 + (s3d + 2) * lgT, 0.0L),
                          name, label + " multiplications above 2T^(sqrt(3d)+2)");
        } else {
          pipeline.expect(below_pow_plus(BigInt(static_cast<unsigned long>(k.adds)), s3d * lgT, 1.0L), name,
                          label + " additions above T^sqrt(3d)+1");
          pipeline.expect(below_pow_plus(BigInt(static_cast<unsigned long>(k.muls)), 1 + 2 * s3d * lgT, 0.0L), name,
                          label + " multiplications above 2T^(2sqrt(3d))");
        }
        pipeline.expect(static_cast<long double>(k.max_mul_fanin) <= (s3d + 1) * kOutward, name,
                        label + " fan-in above sqrt(3d)+1");
        if (is_ordinary && small_constants) {
          pipeline.expect(k.max_const <= pow2(t), name, label + " constant above 2^t");
        }
        pipeline.expect(oracle::depth(r.circuit) <= 4 && sigma_pi_sigma_pi(r.circuit), name, label + " not depth 4");
        pipeline.expect(r.report.all_ok(), name, label + " report has a failed bound");
      });
    }
    for (unsigned delta : {2u, 3u}) {
      no_throw(equiv, name, [&] {
        Transformed r = abp_to_depth_2delta(abp, delta);
        same(r.circuit, "abp_to_depth_2delta");
        equiv.expect(oracle::depth(r.circuit) <= 2 * delta, name, "depth above 2 Delta");
      });
    }

    // Polylog depth.
    no_throw(equiv, name, [&] {
      Transformed r = reduce_to_polylog(c);
      same(r.circuit, "reduce_to_polylog");
      const unsigned long bound = 4 * (1 + ceil_lg(t)) * (1 + floor_lg(d));
      const unsigned long depth = oracle::depth(r.circuit);
      logdepth.expect(depth <= bound, name, "polylog depth " + std::to_string(depth) + " > " + std::to_string(bound));
      logdepth.expect(r.report.all_ok(), name, "polylog report has a failed bound");
    });

    // Homogenization.
    if (is_ordinary) {
      const unsigned long want = static_cast<unsigned long>(std::max<long>(true_degree, 1));
      for (auto mode : {HomogenizeMode::Vp, HomogenizeMode::Vp0}) {
        const std::string label = mode == HomogenizeMode::Vp ? "homogenize[vp]" : "homogenize[vp0]";
        if (mode == HomogenizeMode::Vp0 && !small_constants) continue;
        no_throw(homog, name, [&] {
          HomogenizeOptions opts;
          opts.mode = mode;
          Homogenized h = homogenize(c, opts);
          equiv.expect(oracle::expand(h.circuit).front() == ref, name, label + " changed the polynomial");
          const unsigned long fd = oracle::formal_degree(h.circuit);
          homog.expect(fd == want, name, label + " formal degree " + std::to_string(fd) + " != " + std::to_string(want));
          if (mode == HomogenizeMode::Vp0) {
            homog.expect(count(h.circuit).constants_small, name, label + " output has a large constant");
            Transformed e = eliminate_subtractions(h.circuit);
            equiv.expect(oracle::expand(e.circuit).front() == ref, name, label + "+eliminate changed the polynomial");
            homog.expect(oracle::formal_degree(e.circuit) <= fd + 1, name, label + "+eliminate raised degree by > 1");
            homog.expect(count(e.circuit).subs == 0, name, label + "+eliminate left a subtraction");
          }
        });
      }
    } else {
      ++homog.skipped;
    }

    // Constant-size lemma on variable-free members of the corpus.
    if (c.variables().empty() && small_constants) {
      BigInt v = oracle::eval_constant(c);
      constsize.expect(abs(v) <= pow2(t * d), name, "|value| above 2^(td)");
    }
  }
  const double sweep = seconds_since(t0);

  // Matrix powering and per-ABP passes over the corpus programs plus the
  // hand-written ones.
  abps.push_back(fixtures::a1());
  abps.push_back(fixtures::a2());
  for (const Abp& g : abps) {
    const std::string name = "abp:" + g.name();
    const unsigned long m = g.nodes();
    const unsigned long delta = std::max<unsigned long>(abp_depth(g), 1);
    std::vector<std::string> vars = g.variables();
    std::vector<Poly> to_sink(m + 1);
    for (NodeId i = 1; i <= m; ++i) to_sink[i] = oracle::path_sum(g, i, m);
    to_sink[m] = oracle::constant(1);
    LabeledMatrix mat = abp_to_matrix(g);
    for (unsigned long p : {delta, delta + 1, delta + 3}) {
      no_throw(power, name, [&] {
        auto pw = symbolic_power(mat, p, vars);
        bool ok = true;
        std::string what;
        for (NodeId i = 1; i <= m && ok; ++i) {
          for (NodeId j = 1; j <= m && ok; ++j) {
            Poly got = oracle::from_sparse(pw[i - 1][j - 1]);
            Poly want = j == m ? to_sink[i] : Poly{};
            if (got != want) {
              ok = false;
              what = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") of M^" + std::to_string(p);
            }
          }
        }
        power.expect(ok, name, what);
        power.expect(oracle::from_sparse(pw[0][m - 1]) == oracle::abp_poly(g), name, "(M^p)_{1,m} is not the ABP polynomial");
      });
    }

    // Depth-4 counts on small programs.
    if (m <= 6 && delta <= 9) {
      const unsigned long q = ceil_sqrt(delta);
      for (auto mode : {Depth4Mode::Circuit, Depth4Mode::Formula}) {
        no_throw(counts, name, [&] {
          Transformed r = abp_to_depth4(g, mode);
          equiv.expect(oracle::expand(r.circuit).front() == oracle::abp_poly(g), name, "abp_to_depth4 changed the polynomial");
          Counts k = count(r.circuit);
          if (q > 1 && k.muls > 0) {
            counts.expect(k.max_mul_fanin == q && k.min_mul_fanin == q, name,
                          "multiplication fan-in " + std::to_string(k.min_mul_fanin) + ".." +
                              std::to_string(k.max_mul_fanin) + " != " + std::to_string(q));
          }
          if (mode == Depth4Mode::Circuit) {
            counts.expect(BigInt(static_cast<unsigned long>(k.adds)) <= ipow(m, 2) + 1, name, "circuit additions > m^2+1");
            counts.expect(BigInt(static_cast<unsigned long>(k.muls)) <= ipow(m, q + 1) + ipow(m, q - 1), name,
                          "circuit multiplications > m^(q+1)+m^(q-1)");
          } else {
            counts.expect(BigInt(static_cast<unsigned long>(k.adds)) <= ipow(m, q - 1) + 1, name,
                          "formula additions " + std::to_string(k.adds) + " > m^(q-1)+1");
            counts.expect(BigInt(static_cast<unsigned long>(k.muls)) <= ipow(m, q - 1) + ipow(m, 2 * q - 2), name,
                          "formula multiplications > m^(q-1)+m^(2q-2)");
          }
          counts.expect(sigma_pi_sigma_pi(r.circuit) && check_shape(r.circuit, ShapeSpec::Depth4SigmaPiSigmaPi).ok,
                        name, "not sigma-pi-sigma-pi");
        });
      }
    }

    // Log-depth blocks.
    no_throw(logdepth, name, [&] {
      Transformed r = abp_to_logdepth(g);
      const unsigned long stages = ceil_lg(delta);
      auto outs = oracle::expand(r.circuit);
      bool ok = outs.size() == m;
      for (NodeId j = 1; ok && j <= m; ++j) ok = outs[j - 1] == (j == 1 ? oracle::constant(1) : oracle::path_sum(g, 1, j));
      logdepth.expect(ok, name, "log-depth outputs differ from path sums");
      Counts k = count(r.circuit);
      logdepth.expect(oracle::depth(r.circuit) <= 2 * stages, name, "log-depth block deeper than 2 ceil(log2 delta)");
      logdepth.expect(BigInt(static_cast<unsigned long>(k.muls)) <= ipow(m, 3) * stages, name, "multiplications > m^3 ceil(log2 delta)");
      logdepth.expect(BigInt(static_cast<unsigned long>(k.adds)) <= ipow(m, 2) * stages, name, "additions > m^2 ceil(log2 delta)");
      logdepth.expect(k.max_mul_fanin <= 2, name, "multiplication fan-in above 2");
    });
  }

  // Constant chains and random variable-free circuits.
  std::vector<Circuit> constant_set;
  for (unsigned k = 0; k <= 6; ++k) constant_set.push_back(gen_const_chain(k));
  for (std::uint64_t seed = 1; seed <= 200; ++seed) constant_set.push_back(constant_circuit(seed));
  for (const auto& c : constant_set) {
    const unsigned long t = c.size();
    const unsigned long d = oracle::formal_degree(c);
    BigInt v = oracle::eval_constant(c);
    constsize.expect(abs(v) <= pow2(t * d), c.name(), "|value| " + bstr(abs(v)) + " above 2^(td)");
  }

  // Boolean flattening.
  const auto b0 = Clock::now();
  unsigned max_literals = 0;
  std::size_t boolean_circuits = 0;
  for (const auto& c : fixtures::boolean_corpus(kBooleanCircuits)) {
    unsigned n = 0;
    for (const auto& v : c.variables()) n = std::max(n, static_cast<unsigned>(std::stoul(v.substr(v[0] == 'n' ? 2 : 1))));
    max_literals = std::max(max_literals, n);
    ++boolean_circuits;
    const std::vector<bool> want = oracle::truth_table(c, n);
    for (unsigned delta : {2u, 3u}) {
      const std::string name = c.name() + " Delta=" + std::to_string(delta);
      no_throw(boolean, name, [&] {
        Transformed r = reduce_boolean(c, delta);
        boolean.expect(oracle::truth_table(r.circuit, n) == want, name, "truth table differs");
        boolean.expect(oracle::depth(r.circuit) <= 2 * delta, name, "depth above 2 Delta");
      });
    }
  }
  const double boolean_time = seconds_since(b0);

  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu circuits, sweep %.1fs (limit %.0fs)", circuits, sweep, kSweepSeconds);
  finish(1, "oracle equivalence of every pass and pipeline", equiv, buf, sweep <= kSweepSeconds && circuits >= 200);
  finish(2, "subtraction elimination bounds", elim);
  finish(3, "addition collapse invariants", collapse);
  finish(4, "circuit to ABP bounds", toabp);
  finish(5, "matrix powering of trimmed ABPs", power, std::to_string(abps.size()) + " programs");
  finish(6, "depth-4 gate counts on small ABPs", counts);
  finish(7, "full depth-4 pipeline bounds", pipeline);
  finish(8, "log-depth blocks and polylog reduction", logdepth);
  finish(9, "constant-size bound", constsize);
  std::snprintf(buf, sizeof buf, "%zu circuits, %u literals max, %.1fs (limit %.0fs)", boolean_circuits, max_literals, boolean_time, kBooleanSeconds);
  finish(10, "boolean flattening", boolean, buf,
         boolean_time <= kBooleanSeconds && max_literals <= 10 && boolean_circuits >= 20);
  finish(11, "homogenization", homog);

  bool all = true;
  for (const auto& l : lines) {
    std::cout << (l.ok ? "PASS" : "FAIL") << " [" << l.id << "] " << l.title << ": " << l.detail << "\n";
    all = all && l.ok;
  }
  return all ? 0 : 1;
}
