// Copyright 2026 The mulegame Authors
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

namespace mulegame {

/// Base class for every error raised by the library. `kind()` is a short
/// stable tag used in machine-readable CLI error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Bad argument or violated precondition.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid_argument", message) {}
};

/// Direction between two coincident points.
class DegenerateDirection : public Error {
 public:
  explicit DegenerateDirection(const std::string& message)
      : Error("degenerate_direction", message) {}
};

/// An edge that cannot be traversed (zero speed over positive length).
class InfeasibleEdge : public Error {
 public:
  explicit InfeasibleEdge(const std::string& message)
      : Error("infeasible_edge", message) {}
};

/// No lattice path between two poses inside the region.
class Unreachable : public Error {
 public:
  explicit Unreachable(const std::string& message)
      : Error("unreachable", message) {}
};

/// No acceptable joint action exists, or the enumeration budget is exceeded.
class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& message)
      : Error("infeasible", message) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& message)
      : Error("budget_exceeded", message) {}
};

/// Scenario file problems. The message carries the line number when known.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(const std::string& message)
      : Error("scenario", message) {}
};

}  // namespace mulegame
