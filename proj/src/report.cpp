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

#include "chasm/report.hpp"

#include <iomanip>
#include <sstream>

#include "chasm/errors.hpp"

namespace chasm {

namespace {
constexpr mpfr_prec_t kPrecision = 256;
}

UpReal::UpReal() {
  mpfr_init2(v_, kPrecision);
  mpfr_set_ui(v_, 0, MPFR_RNDU);
}

UpReal::UpReal(const BigInt& v) {
  mpfr_init2(v_, kPrecision);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDU);
}

UpReal::UpReal(double v) {
  mpfr_init2(v_, kPrecision);
  mpfr_set_d(v_, v, MPFR_RNDU);
}

UpReal::UpReal(const UpReal& o) {
  mpfr_init2(v_, kPrecision);
  mpfr_set(v_, o.v_, MPFR_RNDU);
}

UpReal& UpReal::operator=(const UpReal& o) {
  if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDU);
  return *this;
}

UpReal::~UpReal() { mpfr_clear(v_); }

UpReal UpReal::log2(const UpReal& x) {
  UpReal r;
  mpfr_log2(r.v_, x.v_, MPFR_RNDU);
  return r;
}

UpReal UpReal::exp2(const UpReal& x) {
  UpReal r;
  mpfr_exp2(r.v_, x.v_, MPFR_RNDU);
  return r;
}

UpReal UpReal::sqrt(const UpReal& x) {
  UpReal r;
  mpfr_sqrt(r.v_, x.v_, MPFR_RNDU);
  return r;
}

UpReal UpReal::pow(const UpReal& base, const UpReal& exponent) {
  UpReal r;
  mpfr_pow(r.v_, base.v_, exponent.v_, MPFR_RNDU);
  return r;
}

UpReal operator+(const UpReal& a, const UpReal& b) {
  UpReal r;
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDU);
  return r;
}

UpReal operator*(const UpReal& a, const UpReal& b) {
  UpReal r;
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDU);
  return r;
}

bool UpReal::bounds(const BigInt& observed) const { return mpfr_cmp_z(v_, observed.get_mpz_t()) >= 0; }

std::string UpReal::str() const {
  if (mpfr_integer_p(v_) && mpfr_cmp_d(v_, 1e30) < 0) {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDU);
    return to_string(z);
  }
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.10RUg", v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BoundCheck check_le(std::string name, const BigInt& observed, const BigInt& claimed, bool convention) {
  return {std::move(name), to_string(claimed), to_string(observed), observed <= claimed, convention};
}

BoundCheck check_le(std::string name, const BigInt& observed, const UpReal& claimed, bool convention) {
  return {std::move(name), claimed.str(), to_string(observed), claimed.bounds(observed), convention};
}

BoundCheck check_eq(std::string name, const BigInt& observed, const BigInt& expected, bool convention) {
  return {std::move(name), "= " + to_string(expected), to_string(observed), observed == expected, convention};
}

bool PassReport::all_ok() const {
  for (const auto& b : bounds) {
    if (!b.ok) return false;
  }
  return true;
}

nlohmann::json to_json(const CircuitStats& s) {
  return {{"size", s.size},
          {"depth", s.depth},
          {"formal_degree", s.formal_degree},
          {"num_inputs", s.num_inputs},
          {"num_consts", s.num_consts},
          {"num_adds", s.num_adds},
          {"num_subs", s.num_subs},
          {"num_muls", s.num_muls},
          {"max_mul_fanin", s.max_mul_fanin},
          {"max_add_fanin", s.max_add_fanin},
          {"max_abs_constant", to_string(s.max_abs_constant)},
          {"max_add_total_weight", to_string(s.max_add_total_weight)}};
}

nlohmann::json to_json(const AbpStats& s) {
  return {{"size", s.size}, {"depth", s.depth}, {"edges", s.edges}, {"trimmed", s.trimmed}};
}

nlohmann::json to_json(const PassReport& r) {
  nlohmann::json j;
  j["pass"] = r.pass;
  j["instance"] = r.instance;
  // A program's stats take the plain key unless a circuit already holds it.
  if (r.input) j["input"] = to_json(*r.input);
  if (r.input_abp) j[r.input ? "input_abp" : "input"] = to_json(*r.input_abp);
  if (r.output) j["output"] = to_json(*r.output);
  if (r.output_abp) j[r.output ? "output_abp" : "output"] = to_json(*r.output_abp);
  j["bounds"] = nlohmann::json::array();
  for (const auto& b : r.bounds) {
    j["bounds"].push_back({{"name", b.name},
                           {"claimed", b.claimed},
                           {"observed", b.observed},
                           {"ok", b.ok},
                           {"source", b.convention ? "convention" : "published"}});
  }
  if (!r.notes.empty()) {
    nlohmann::json notes = nlohmann::json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    j["notes"] = notes;
  }
  return j;
}

PassReport pass_report_from_json(const nlohmann::json& j) {
  PassReport r;
  r.pass = j.value("pass", "");
  r.instance = j.value("instance", "");
  for (const auto& b : j.value("bounds", nlohmann::json::array())) {
    r.bounds.push_back({b.at("name").get<std::string>(), b.at("claimed").get<std::string>(),
                        b.at("observed").get<std::string>(), b.at("ok").get<bool>(),
                        b.value("source", "published") == "convention"});
  }
  if (j.contains("notes")) {
    for (auto it = j["notes"].begin(); it != j["notes"].end(); ++it) r.note(it.key(), it.value().get<std::string>());
  }
  return r;
}

AggregateReport bound_report(const std::vector<PassReport>& reports) {
  if (reports.empty()) throw PreconditionViolated("bound report needs at least one pass report");
  AggregateReport agg;
  agg.json["passes"] = nlohmann::json::array();
  std::size_t total = 0, failed = 0;
  std::ostringstream os;
  os << std::left << std::setw(24) << "instance" << std::setw(28) << "pass" << std::setw(56) << "bound"
     << std::setw(22) << "claimed" << std::setw(16) << "observed" << std::setw(6) << "ok"
     << "source\n";
  for (const auto& r : reports) {
    agg.json["passes"].push_back(to_json(r));
    for (const auto& b : r.bounds) {
      ++total;
      if (!b.ok) ++failed;
      os << std::setw(24) << r.instance << std::setw(28) << r.pass << std::setw(56) << b.name << std::setw(22)
         << b.claimed << std::setw(16) << b.observed << std::setw(6) << (b.ok ? "yes" : "NO")
         << (b.convention ? "convention" : "published") << '\n';
    }
  }
  os << "total " << total << " bounds, " << failed << " failed\n";
  agg.all_bounds_ok = failed == 0;
  agg.json["total_bounds"] = total;
  agg.json["failed_bounds"] = failed;
  agg.json["all_bounds_ok"] = agg.all_bounds_ok;
  agg.table = os.str();
  return agg;
}

}  // namespace chasm
