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
#include <stdexcept>
#include <string>

namespace chasm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A pass was given a circuit outside its input class.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Exact expansion produced more monomials than the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t where, std::size_t count)
      : Error("monomial cap exceeded at " + std::to_string(where) + " (" +
              std::to_string(count) + " monomials)"),
        where_(where),
        count_(count) {}
  std::uint64_t where() const { return where_; }
  std::size_t count() const { return count_; }

 private:
  std::uint64_t where_;
  std::size_t count_;
};

/// Subtraction or non-{0,1} weights/constants evaluated over a non-ring.
class StructureMismatch : public Error {
 public:
  using Error::Error;
};

class NotTrimmed : public Error {
 public:
  using Error::Error;
};

class NotWeaklySkew : public Error {
 public:
  using Error::Error;
};

class LayerNotSkew : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace chasm
