// Copyright 2026 The rbmk Authors
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

namespace rbmk {

// Shapes that do not fit together (non-square, mismatched E/S dims, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A channel representation that cannot be produced or is internally inconsistent.
class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural precondition on an operand does not hold (non-Pauli channel,
// non-idempotent projector, SE dissipator where only local ones are allowed).
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user-supplied parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical result broke a documented module invariant.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rbmk
