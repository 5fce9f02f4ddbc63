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

#include "forgevar/buildfile.hpp"

#include <charconv>

#include "forgevar/error.hpp"

namespace forgevar {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

TokenKind classify(std::string_view text) {
  if (text == ":") return TokenKind::Colon;
  if (text == ";") return TokenKind::Semicolon;
  if (text == "{") return TokenKind::LBrace;
  if (text == "}") return TokenKind::RBrace;
  return TokenKind::Word;
}

bool opens_action_body(const std::vector<Token>& tokens) {
  auto n = tokens.size();
  return n >= 2 && tokens[n - 2].kind == TokenKind::Word && tokens[n - 2].text == "actions" &&
         tokens[n - 1].kind == TokenKind::Word;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      if (c == '\n') ++line;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::string_view word = text.substr(start, i - start);

    if (word == "{" && opens_action_body(tokens)) {
      const int body_line = line;
      std::size_t body_start = i;
      int depth = 1;
      while (i < text.size()) {
        if (text[i] == '{') {
          ++depth;
        } else if (text[i] == '}') {
          if (--depth == 0) break;
        } else if (text[i] == '\n') {
          ++line;
        }
        ++i;
      }
      if (i >= text.size()) {
        throw Error(ErrorKind::UnterminatedActions,
                    "unterminated actions block for '" + tokens.back().text + "'", body_line);
      }
      tokens.push_back({std::string(text.substr(body_start, i - body_start)), TokenKind::Body,
                        body_line});
      ++i;  // closing brace
      continue;
    }
    tokens.push_back({std::string(word), classify(word), line});
  }
  return tokens;
}

int statement_line(const Statement& s) {
  return std::visit([](const auto& v) { return v.line; }, s);
}

Property parse_property_word(std::string_view word, int line) {
  try {
    if (!word.empty() && word.front() == '<') {
      auto close = word.find('>');
      if (close == std::string_view::npos || close == 1 || close + 1 >= word.size()) {
        throw Error(ErrorKind::MalformedProperty,
                    "expected <feature>value, got '" + std::string(word) + "'");
      }
      return split_property(std::string(word.substr(1, close - 1)) + "=" +
                            std::string(word.substr(close + 1)));
    }
    return split_property(word);
  } catch (const Error& e) {
    throw Error(e.kind(), e.message(), line);
  }
}

namespace {

std::vector<Property> parse_property_list(std::string_view text, int line) {
  std::vector<Property> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_property_word(piece, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Requirement parse_requirement_word(std::string_view word, int line) {
  auto malformed = [&](const std::string& why) {
    return Error(ErrorKind::MalformedRequirement,
                 "malformed requirement '" + std::string(word) + "': " + why, line);
  };
  if (!word.empty() && word.front() == '@') {
    if (word.size() == 1) throw malformed("missing rule name");
    return Requirement::indirect(std::string(word.substr(1)));
  }
  try {
    auto colon = word.find(':');
    if (colon == std::string_view::npos) {
      return Requirement::simple(parse_property_list(word, line));
    }
    if (word.find(':', colon + 1) != std::string_view::npos) {
      throw malformed("more than one ':'");
    }
    return Requirement::conditional(parse_property_list(word.substr(0, colon), line),
                                    parse_property_list(word.substr(colon + 1), line));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedRequirement) throw;
    throw malformed(e.message());
  }
}

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  std::vector<Statement> run() {
    std::vector<Statement> out;
    while (pos_ < tokens_.size()) out.push_back(statement());
    return out;
  }

 private:
  using Fields = std::vector<std::vector<std::string>>;

  Statement statement() {
    const Token& head = tokens_[pos_++];
    if (head.kind != TokenKind::Word) {
      throw Error(ErrorKind::MalformedStatement, "unexpected '" + head.text + "'", head.line);
    }
    const std::string& rule = head.text;
    if (rule == "lib" || rule == "exe" || rule == "obj") return declaration(head);
    if (rule == "actions") return actions(head);
    if (rule == "flags") return flags(head);
    if (rule == "project-requirements") return project_requirements(head);
    throw Error(ErrorKind::UnknownRule, "unknown rule '" + rule + "'", head.line);
  }

  // Colon-separated word lists up to the terminating semicolon.
  Fields fields(const Token& head) {
    Fields out(1);
    while (true) {
      if (pos_ >= tokens_.size()) {
        throw Error(ErrorKind::MissingSemicolon,
                    "missing ';' at end of '" + head.text + "' statement", head.line);
      }
      const Token& t = tokens_[pos_++];
      switch (t.kind) {
        case TokenKind::Semicolon:
          return out;
        case TokenKind::Colon:
          out.emplace_back();
          break;
        case TokenKind::Word:
          out.back().push_back(t.text);
          break;
        default:
          throw Error(ErrorKind::MalformedStatement, "unexpected '" + t.text + "'", t.line);
      }
    }
  }

  Statement declaration(const Token& head) {
    Fields f = fields(head);
    if (f.size() > 3) {
      throw Error(ErrorKind::MalformedStatement,
                  "'" + head.text + "' takes at most three fields", head.line);
    }
    if (f[0].size() != 1) {
      throw Error(ErrorKind::MalformedStatement,
                  "'" + head.text + "' expects exactly one target name", head.line);
    }
    Declaration d;
    d.rule = head.text;
    d.names = f[0];
    d.line = head.line;
    if (f.size() > 1) d.sources = f[1];
    if (f.size() > 2) {
      for (const auto& w : f[2]) d.requirements.push_back(parse_requirement_word(w, head.line));
    }
    return d;
  }

  Statement actions(const Token& head) {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorKind::MalformedStatement, "'actions' expects a name", head.line);
    }
    const Token& name = tokens_[pos_++];
    if (name.kind != TokenKind::Word) {
      throw Error(ErrorKind::MalformedStatement, "'actions' expects a name", head.line);
    }
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != TokenKind::Body) {
      throw Error(ErrorKind::MalformedStatement,
                  "'actions " + name.text + "' expects a { ... } body", head.line);
    }
    ActionsDef a{name.text, tokens_[pos_++].text, head.line};
    return a;
  }

  Statement flags(const Token& head) {
    Fields f = fields(head);
    if (f[0].size() != 2 || f.size() < 2 || f.size() > 3) {
      throw Error(ErrorKind::MalformedStatement,
                  "expected 'flags <template> <VARIABLE> : <condition> : <values> ;'",
                  head.line);
    }
    FlagsDef d;
    d.template_name = f[0][0];
    d.variable = f[0][1];
    d.line = head.line;
    if (f.size() == 3) {
      for (const auto& w : f[1]) {
        for (auto& p : parse_property_list(w, head.line)) d.condition.push_back(std::move(p));
      }
    }
    d.values = f.back();
    return d;
  }

  Statement project_requirements(const Token& head) {
    Fields f = fields(head);
    if (f.size() != 1) {
      throw Error(ErrorKind::MalformedStatement,
                  "'project-requirements' takes a single list of requirements", head.line);
    }
    ProjectRequirements p;
    p.line = head.line;
    for (const auto& w : f[0]) p.requirements.push_back(parse_requirement_word(w, head.line));
    return p;
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::vector<Statement> parse_buildfile(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

std::vector<Statement> parse_buildfile(std::string_view text) {
  return parse_buildfile(tokenize(text));
}

std::string print_buildfile(const std::vector<Statement>& statements) {
  std::string out;
  for (const auto& s : statements) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Declaration>) {
            out += v.rule + " " + join_words(v.names);
            if (!v.sources.empty() || !v.requirements.empty()) {
              out += " :";
              if (!v.sources.empty()) out += " " + join_words(v.sources);
            }
            if (!v.requirements.empty()) {
              out += " :";
              for (const auto& r : v.requirements) out += " " + to_string(r);
            }
            out += " ;\n";
          } else if constexpr (std::is_same_v<T, ActionsDef>) {
            out += "actions " + v.name + " {" + v.body + "}\n";
          } else if constexpr (std::is_same_v<T, FlagsDef>) {
            out += "flags " + v.template_name + " " + v.variable + " :";
            for (const auto& p : v.condition) out += " " + to_string(p);
            out += " :";
            if (!v.values.empty()) out += " " + join_words(v.values);
            out += " ;\n";
          } else {
            out += "project-requirements";
            for (const auto& r : v.requirements) out += " " + to_string(r);
            out += " ;\n";
          }
        },
        s);
  }
  return out;
}

CommandLine parse_command_line(const FeatureRegistry& registry,
                               const std::vector<std::string>& args) {
  CommandLine cl;
  cl.requests.emplace_back();
  for (const auto& arg : args) {
    if (arg == "--") {
      cl.requests.emplace_back();
    } else if (!arg.empty() && arg.front() == '-') {
      if (arg == "--dry-run") {
        cl.options.dry_run = true;
      } else if (arg == "--list-targets") {
        cl.options.list_targets = true;
      } else if (arg.size() > 2 && arg.compare(0, 2, "-j") == 0) {
        int jobs = 0;
        const char* first = arg.data() + 2;
        const char* last = arg.data() + arg.size();
        auto [ptr, ec] = std::from_chars(first, last, jobs);
        if (ec != std::errc() || ptr != last || jobs < 1) {
          throw Error(ErrorKind::Usage, "invalid job count in '" + arg + "'");
        }
        cl.options.jobs = jobs;
      } else {
        throw Error(ErrorKind::UnknownOption, "unknown option '" + arg + "'");
      }
    } else if (arg.find('=') != std::string::npos) {
      Property p = parse_property(registry, arg);
      auto& request = cl.requests.back();
      if (request.properties.has(p.feature)) {
        throw Error(ErrorKind::Usage, "feature '" + p.feature +
                                          "' given twice in one build request; separate "
                                          "variants with '--'");
      }
      request.properties.set(p);
    } else {
      cl.requests.back().targets.push_back(arg);
    }
  }
  return cl;
}

}  // namespace forgevar
