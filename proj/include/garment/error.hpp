// Copyright 2026 The garment3d Authors.
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

#include <stdexcept>
#include <string>

namespace garment {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents (JSON syntax, OBJ tokens, PNG decoding).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a data contract. `field()` names the
/// offending entry (landmark name, marker name, label id, ...).
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// File system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Measurements that cannot be realized by the garment model.
class MeasurementError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition or bad argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace garment
