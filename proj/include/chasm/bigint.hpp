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

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace chasm {

using BigInt = mpz_class;

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

/// Parses a signed decimal integer. Returns false on malformed input.
bool parse_bigint(const std::string& text, BigInt& out);

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "64-bit unsigned long expected");

inline BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

}  // namespace chasm
