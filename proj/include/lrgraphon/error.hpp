// Copyright 2026 The lrgraphon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrgraphon {

enum class ErrorKind {
  kInvalidArgument,
  kModelValidity,
  kDegenerateGraph,
  kInsufficientNodes,
  kSolverFailure,
  kDegenerateSolution,
  kIllConditioned,
  kUnidentifiableComponent,
  kResourceLimit,
  kShapeMismatch,
  kIo,
  kParse,
};

inline std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kModelValidity: return "model_validity";
    case ErrorKind::kDegenerateGraph: return "degenerate_graph";
    case ErrorKind::kInsufficientNodes: return "insufficient_nodes";
    case ErrorKind::kSolverFailure: return "solver_failure";
    case ErrorKind::kDegenerateSolution: return "degenerate_solution";
    case ErrorKind::kIllConditioned: return "ill_conditioned";
    case ErrorKind::kUnidentifiableComponent: return "unidentifiable_component";
    case ErrorKind::kResourceLimit: return "resource_limit";
    case ErrorKind::kShapeMismatch: return "shape_mismatch";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

// Single exception type for the library; `kind()` lets callers (the CLI in
// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Pipeline stage that raised the error, empty when not annotated.
  const std::string& stage() const noexcept { return stage_; }

  Error WithStage(std::string stage) const {
    Error annotated(kind_, stage + ": " + what());
    annotated.stage_ = std::move(stage);
    return annotated;
  }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lrgraphon
