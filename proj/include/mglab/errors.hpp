// Copyright 2026 The mglab Authors
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

namespace mglab {

// Violated caller-side precondition (bad argument value, empty input, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// State, action, or step index outside the game's dimensions.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed game description (bad transition vector, reward range, shape).
class GameConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal invariant broken; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The LP engine failed on an input that should always be solvable.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config or log file could not be parsed. Carries the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A run log ended early or failed its internal consistency checks.
class CorruptLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void Require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace mglab
