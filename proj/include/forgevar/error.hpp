// Copyright 2026 The forgevar Authors. All Rights Reserved.
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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forgevar {

enum class ErrorKind {
  // property model
  DuplicateFeature,
  InvalidDefault,
  UnknownFeature,
  UnknownValue,
  MalformedProperty,
  NonConvergingConditionals,
  UnknownAdjuster,
  MissingRequiredFeature,
  // buildfile and command line
  UnterminatedActions,
  UnknownRule,
  MissingSemicolon,
  MalformedRequirement,
  MalformedStatement,
  UnknownOption,
  Usage,
  // metatargets and generators
  DuplicateMetatarget,
  UnknownMetatarget,
  CyclicMetatargetReference,
  DuplicateGenerator,
  NoViableGenerator,
  AmbiguousGenerators,
  // toolsets
  UnknownPlaceholder,
  UnknownTemplate,
  NoNamingRule,
  // graph and execution
  ConflictingTarget,
  MissingSource,
  CyclicGraph,
  StateStoreIO,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in forgevar surfaces as this exception. `line` is set for
/// errors tied to a buildfile location.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<int> line = std::nullopt);

  ErrorKind kind() const { return kind_; }
  std::optional<int> line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::optional<int> line_;
  std::string message_;
};

}  // namespace forgevar
