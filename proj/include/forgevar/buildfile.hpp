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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forgevar/property.hpp"

namespace forgevar {

enum class TokenKind { Word, Colon, Semicolon, LBrace, RBrace, Body };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Word;
  int line = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Whitespace-delimited lexing. `#` at the start of a token begins a comment.
/// The brace block after `actions <name>` becomes a single Body token holding
/// the text between the braces verbatim.
std::vector<Token> tokenize(std::string_view text);

/// `lib`, `exe` or `obj` declaration.
struct Declaration {
  std::string rule;
  std::vector<std::string> names;
  std::vector<std::string> sources;
  std::vector<Requirement> requirements;
  int line = 0;

  friend bool operator==(const Declaration& a, const Declaration& b) {
    return a.rule == b.rule && a.names == b.names && a.sources == b.sources &&
           a.requirements == b.requirements;
  }
};

struct ActionsDef {
  std::string name;
  std::string body;
  int line = 0;

  friend bool operator==(const ActionsDef& a, const ActionsDef& b) {
    return a.name == b.name && a.body == b.body;
  }
};

struct FlagsDef {
  std::string template_name;
  std::string variable;
  std::vector<Property> condition;
  std::vector<std::string> values;
  int line = 0;

  friend bool operator==(const FlagsDef& a, const FlagsDef& b) {
    return a.template_name == b.template_name && a.variable == b.variable &&
           a.condition == b.condition && a.values == b.values;
  }
};

struct ProjectRequirements {
  std::vector<Requirement> requirements;
  int line = 0;

  friend bool operator==(const ProjectRequirements& a, const ProjectRequirements& b) {
    return a.requirements == b.requirements;
  }
};

using Statement = std::variant<Declaration, ActionsDef, FlagsDef, ProjectRequirements>;

int statement_line(const Statement& s);

std::vector<Statement> parse_buildfile(const std::vector<Token>& tokens);

/// tokenize + parse_buildfile.
std::vector<Statement> parse_buildfile(std::string_view text);

/// Canonical formatter; parse_buildfile(print_buildfile(s)) == s.
std::string print_buildfile(const std::vector<Statement>& statements);

/// Property word as written in a buildfile: `f=v` or `<f>v`.
Property parse_property_word(std::string_view word, int line);

/// `f=v`, `a=1,b=2:c=3`, or `@rule`.
Requirement parse_requirement_word(std::string_view word, int line);

struct CommandLineOptions {
  int jobs = 1;
  bool dry_run = false;
  bool list_targets = false;

  friend bool operator==(const CommandLineOptions&, const CommandLineOptions&) = default;
};

struct BuildRequest {
  PropertySet properties;
  std::vector<std::string> targets;

  friend bool operator==(const BuildRequest&, const BuildRequest&) = default;
};

struct CommandLine {
  CommandLineOptions options;
  std::vector<BuildRequest> requests;
};

/// Options start with '-', `--` separates build requests, `f=v` tokens are
/// properties, anything else names a target. Always yields at least one
/// request.
CommandLine parse_command_line(const FeatureRegistry& registry,
                               const std::vector<std::string>& args);

}  // namespace forgevar
