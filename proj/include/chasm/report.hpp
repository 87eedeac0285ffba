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

#include <mpfr.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chasm/abp.hpp"
#include "chasm/bigint.hpp"
#include "chasm/circuit.hpp"
#include "json.hpp"

namespace chasm {

/// Positive real upper bound kept in MPFR with every operation rounded
/// toward +infinity, so the computed value never undershoots the exact one.
class UpReal {
 public:
  UpReal();
  explicit UpReal(const BigInt& v);
  explicit UpReal(double v);
  UpReal(const UpReal& o);
  UpReal& operator=(const UpReal& o);
  ~UpReal();

  static UpReal log2(const UpReal& x);
  static UpReal exp2(const UpReal& x);
  static UpReal sqrt(const UpReal& x);
  /// base^exponent for base >= 1.
  static UpReal pow(const UpReal& base, const UpReal& exponent);

  friend UpReal operator+(const UpReal& a, const UpReal& b);
  friend UpReal operator*(const UpReal& a, const UpReal& b);

  /// True when `observed` <= this value.
  bool bounds(const BigInt& observed) const;
  std::string str() const;

 private:
  mpfr_t v_;
};

struct BoundCheck {
  std::string name;
  std::string claimed;
  std::string observed;
  bool ok = false;
  /// Repository convention rather than a published bound.
  bool convention = false;
};

BoundCheck check_le(std::string name, const BigInt& observed, const BigInt& claimed, bool convention = false);
BoundCheck check_le(std::string name, const BigInt& observed, const UpReal& claimed, bool convention = false);
BoundCheck check_eq(std::string name, const BigInt& observed, const BigInt& expected, bool convention = false);

struct PassReport {
  std::string pass;
  std::string instance;
  std::optional<CircuitStats> input;
  std::optional<AbpStats> input_abp;
  std::optional<CircuitStats> output;
  std::optional<AbpStats> output_abp;
  std::vector<BoundCheck> bounds;
  std::vector<std::pair<std::string, std::string>> notes;

  bool all_ok() const;
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

nlohmann::json to_json(const CircuitStats& s);
nlohmann::json to_json(const AbpStats& s);
nlohmann::json to_json(const PassReport& r);
/// Restores pass, instance, bounds and notes; statistics are not read back.
PassReport pass_report_from_json(const nlohmann::json& j);

struct AggregateReport {
  nlohmann::json json;
  std::string table;
  bool all_bounds_ok = true;
};

/// Aggregates pass reports into one JSON document (with `all_bounds_ok`)
/// and a plain-text table, one row per (instance, bound). Throws
/// PreconditionViolated on an empty list.
AggregateReport bound_report(const std::vector<PassReport>& reports);

}  // namespace chasm
