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

#include "forgevar/error.hpp"

namespace forgevar {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateFeature: return "DuplicateFeature";
    case ErrorKind::InvalidDefault: return "InvalidDefault";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::UnknownValue: return "UnknownValue";
    case ErrorKind::MalformedProperty: return "MalformedProperty";
    case ErrorKind::NonConvergingConditionals: return "NonConvergingConditionals";
    case ErrorKind::UnknownAdjuster: return "UnknownAdjuster";
    case ErrorKind::MissingRequiredFeature: return "MissingRequiredFeature";
    case ErrorKind::UnterminatedActions: return "UnterminatedActions";
    case ErrorKind::UnknownRule: return "UnknownRule";
    case ErrorKind::MissingSemicolon: return "MissingSemicolon";
    case ErrorKind::MalformedRequirement: return "MalformedRequirement";
    case ErrorKind::MalformedStatement: return "MalformedStatement";
    case ErrorKind::UnknownOption: return "UnknownOption";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::DuplicateMetatarget: return "DuplicateMetatarget";
    case ErrorKind::UnknownMetatarget: return "UnknownMetatarget";
    case ErrorKind::CyclicMetatargetReference: return "CyclicMetatargetReference";
    case ErrorKind::DuplicateGenerator: return "DuplicateGenerator";
    case ErrorKind::NoViableGenerator: return "NoViableGenerator";
    case ErrorKind::AmbiguousGenerators: return "AmbiguousGenerators";
    case ErrorKind::UnknownPlaceholder: return "UnknownPlaceholder";
    case ErrorKind::UnknownTemplate: return "UnknownTemplate";
    case ErrorKind::NoNamingRule: return "NoNamingRule";
    case ErrorKind::ConflictingTarget: return "ConflictingTarget";
    case ErrorKind::MissingSource: return "MissingSource";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::StateStoreIO: return "StateStoreIO";
  }
  return "Error";
}

namespace {

std::string compose(const std::string& message, std::optional<int> line) {
  if (line) return "line " + std::to_string(*line) + ": " + message;
  return message;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<int> line)
    : std::runtime_error(compose(message, line)),
      kind_(kind),
      line_(line),
      message_(message) {}

}  // namespace forgevar
