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

#include "forgevar/toolset.hpp"

#include <algorithm>
#include <filesystem>

#include "forgevar/buildfile.hpp"
#include "forgevar/error.hpp"

namespace fs = std::filesystem;

namespace forgevar {

VariableBindings bind_variables(const std::vector<FlagRule>& rules,
                                const std::string& template_name,
                                const PropertySet& properties) {
  VariableBindings out;
  for (const auto& rule : rules) {
    if (rule.template_name != template_name) continue;
    auto& values = out[rule.variable];
    bool holds = std::all_of(rule.condition.begin(), rule.condition.end(),
                             [&](const Property& p) { return properties.contains(p); });
    if (holds) values.insert(values.end(), rule.additions.begin(), rule.additions.end());
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string render_line(std::string_view line, int line_no, const ActionTemplate& action,
                        const VariableBindings& bindings, const std::string& target_path,
                        const std::vector<std::string>& source_paths) {
  std::string out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line.compare(i, 2, "$(") != 0) {
      out += line[i++];
      continue;
    }
    auto close = line.find(')', i + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::UnknownPlaceholder,
                  "unterminated placeholder in actions '" + action.name + "'", line_no);
    }
    std::string name(line.substr(i + 2, close - i - 2));
    std::string value;
    if (name == "TARGET") {
      value = target_path;
    } else if (name == "SOURCES") {
      value = join(source_paths);
    } else if (auto it = bindings.find(name); it != bindings.end()) {
      value = join(it->second);
    } else {
      throw Error(ErrorKind::UnknownPlaceholder,
                  "unknown variable $(" + name + ") in actions '" + action.name + "'", line_no);
    }
    i = close + 1;
    if (value.empty()) {
      bool space_after = i >= line.size() || line[i] == ' ';
      if (!out.empty() && out.back() == ' ' && space_after) {
        out.pop_back();
      } else if (out.empty() && i < line.size() && line[i] == ' ') {
        ++i;
      }
    }
    out += value;
  }
  return out;
}

}  // namespace

std::string render_command(const ActionTemplate& action, const VariableBindings& bindings,
                           const std::string& target_path,
                           const std::vector<std::string>& source_paths) {
  std::string out;
  std::string_view body = action.body;
  int line_no = action.line;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    auto raw = body.substr(start, nl == std::string_view::npos ? body.npos : nl - start);
    auto line = trim(raw);
    if (!line.empty()) {
      if (!out.empty()) out += '\n';
      out += render_line(line, line_no, action, bindings, target_path, source_paths);
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
    ++line_no;
  }
  return out;
}

std::string target_file_name(const std::vector<NamingRule>& rules, const std::string& base_name,
                             const TargetType& target_type, const PropertySet& properties) {
  const std::string os = properties.get("target-os").value_or(host_target_os());
  const std::string link = properties.get("link").value_or(std::string(kAnyLink));
  const NamingRule* fallback = nullptr;
  for (const auto& r : rules) {
    if (r.target_type != target_type || r.target_os != os) continue;
    if (r.link == link) return r.prefix + base_name + r.suffix;
    if (r.link == kAnyLink) fallback = &r;
  }
  if (fallback) return fallback->prefix + base_name + fallback->suffix;
  throw Error(ErrorKind::NoNamingRule,
              "no naming rule for " + target_type + " on target-os=" + os);
}

std::vector<NamingRule> default_naming_rules() {
  return {
      {"LIB", "linux", "shared", "lib", ".so"},
      {"LIB", "linux", "static", "lib", ".a"},
      {"LIB", "windows", "shared", "", ".dll"},
      {"LIB", "windows", "static", "", ".lib"},
      {"EXE", "linux", "*", "", ""},
      {"EXE", "windows", "*", "", ".exe"},
      {"OBJ", "linux", "*", "", ".o"},
      {"OBJ", "windows", "*", "", ".obj"},
  };
}

void Toolkit::define_action(ActionTemplate action) {
  auto name = action.name;
  actions_.insert_or_assign(std::move(name), std::move(action));
}

void Toolkit::add_flag_rule(const FeatureRegistry& registry, FlagRule rule) {
  if (rule.variable == "TARGET" || rule.variable == "SOURCES") {
    throw Error(ErrorKind::MalformedStatement,
                "flags may not bind the reserved variable " + rule.variable);
  }
  for (const auto& p : rule.condition) registry.validate(p);
  flag_rules_.push_back(std::move(rule));
}

void Toolkit::add_naming_rule(NamingRule rule) {
  auto same = std::find_if(naming_rules_.begin(), naming_rules_.end(), [&](const NamingRule& r) {
    return r.target_type == rule.target_type && r.target_os == rule.target_os &&
           r.link == rule.link;
  });
  if (same != naming_rules_.end()) {
    *same = std::move(rule);
  } else {
    naming_rules_.push_back(std::move(rule));
  }
}

const ActionTemplate* Toolkit::find_action(const std::string& name) const {
  auto it = actions_.find(name);
  return it == actions_.end() ? nullptr : &it->second;
}

std::string Toolkit::render(const std::string& template_name, const PropertySet& properties,
                            const std::string& target_path,
                            const std::vector<std::string>& source_paths) const {
  const ActionTemplate* action = find_action(template_name);
  if (action == nullptr) {
    throw Error(ErrorKind::UnknownTemplate, "no actions defined for '" + template_name + "'");
  }
  VariableBindings bindings = bind_variables(flag_rules_, template_name, properties);
  // A variable some flag rule defines anywhere expands to nothing here.
  for (const auto& rule : flag_rules_) bindings.try_emplace(rule.variable);
  return render_command(*action, bindings, target_path, source_paths);
}

namespace {

// Relative path with root, "." and ".." components dropped, so outputs never
// leave the variant directory.
fs::path contained(const fs::path& p) {
  fs::path out;
  for (const auto& part : p.relative_path()) {
    if (part == "." || part == "..") continue;
    out /= part;
  }
  return out;
}

std::string output_path(const GeneratorCall& call, const std::string& name,
                        const TargetType& type) {
  const auto& ctx = call.context;
  fs::path rel = contained(fs::path(name));
  std::string file = target_file_name(ctx.toolkit.naming_rules(), rel.filename().string(), type,
                                      call.properties);
  fs::path out = fs::path(ctx.build_root) / property_path(ctx.features, call.properties) /
                 rel.parent_path() / file;
  return out.lexically_normal().generic_string();
}

std::string without_extension(const std::string& path) {
  fs::path p = contained(fs::path(path));
  return (p.parent_path() / p.stem()).generic_string();
}

}  // namespace

GeneratorSpec make_compile_generator(std::string id, PropertySet required, TargetType consumes) {
  GeneratorSpec spec;
  spec.id = id;
  spec.target_type = "OBJ";
  spec.required = std::move(required);
  spec.consumes = std::move(consumes);
  spec.template_name = std::move(id);
  spec.construct = [](const GeneratorCall& call) -> std::optional<std::vector<ConcreteTarget>> {
    if (call.sources.size() != 1 || call.sources.front().type != call.generator.consumes) {
      return std::nullopt;
    }
    const auto& source = call.sources.front();
    ConcreteTarget t;
    t.path = output_path(call, call.name, "OBJ");
    t.type = "OBJ";
    t.dependencies = {source.path};
    t.template_name = call.generator.template_name;
    t.command = call.context.toolkit.render(t.template_name, call.properties, t.path, {source.path});
    return std::vector<ConcreteTarget>{std::move(t)};
  };
  return spec;
}

GeneratorSpec make_link_generator(std::string id, TargetType target_type, PropertySet required,
                                  TargetType consumes) {
  GeneratorSpec spec;
  spec.id = id;
  spec.target_type = std::move(target_type);
  spec.required = std::move(required);
  spec.consumes = std::move(consumes);
  spec.template_name = std::move(id);
  spec.construct = [](const GeneratorCall& call) -> std::optional<std::vector<ConcreteTarget>> {
    if (call.sources.empty()) return std::nullopt;
    const auto& gen = call.generator;
    std::vector<ConcreteTarget> subgraph;
    std::vector<std::string> inputs;
    for (const auto& source : call.sources) {
      if (source.type == gen.consumes || source.type == "LIB") {
        inputs.push_back(source.path);
        continue;
      }
      std::vector<ConcreteTarget> produced;
      try {
        produced = call.context.generators.dispatch(call.context, gen.consumes,
                                                    without_extension(source.path),
                                                    call.properties, {source});
      } catch (const Error& e) {
        throw Error(e.kind(), "while building '" + source.path + "' for " + gen.id + " '" +
                                  call.name + "': " + e.message(),
                    e.line());
      }
      inputs.push_back(produced.front().path);
      for (auto& t : produced) subgraph.push_back(std::move(t));
    }
    ConcreteTarget product;
    product.path = output_path(call, call.name, gen.target_type);
    product.type = gen.target_type;
    product.dependencies = inputs;
    product.template_name = gen.template_name;
    product.command =
        call.context.toolkit.render(product.template_name, call.properties, product.path, inputs);

    std::vector<ConcreteTarget> out;
    out.push_back(std::move(product));
    for (auto& t : subgraph) out.push_back(std::move(t));
    return out;
  };
  return spec;
}

void register_toolset_generators(BuildContext& context, const std::string& toolset) {
  context.features.extend_feature("toolset", toolset);
  const Property tool{"toolset", toolset};
  auto& generators = context.generators;
  generators.register_generator(make_compile_generator(toolset + ".compile", {tool}));
  generators.register_generator(make_link_generator(toolset + ".link", "EXE", {tool}));
  generators.register_generator(
      make_link_generator(toolset + ".link.dll", "LIB", {tool, {"link", "shared"}}));
  generators.register_generator(
      make_link_generator(toolset + ".archive", "LIB", {tool, {"link", "static"}}));
}

void load_toolset_module(BuildContext& context, std::string_view module_text) {
  for (const auto& statement : parse_buildfile(module_text)) {
    if (const auto* a = std::get_if<ActionsDef>(&statement)) {
      context.toolkit.define_action({a->name, a->body, a->line});
    } else if (const auto* f = std::get_if<FlagsDef>(&statement)) {
      try {
        context.toolkit.add_flag_rule(context.features,
                                      {f->template_name, f->variable, f->condition, f->values});
      } catch (const Error& e) {
        throw Error(e.kind(), e.message(), f->line);
      }
    } else {
      throw Error(ErrorKind::MalformedStatement,
                  "toolset modules may only contain 'actions' and 'flags'",
                  statement_line(statement));
    }
  }
}

void load_builtin_toolsets(BuildContext& context) {
  for (const auto& rule : default_naming_rules()) context.toolkit.add_naming_rule(rule);
  for (const auto& [name, text] : builtin_toolset_modules()) {
    context.features.extend_feature("toolset", name);
    load_toolset_module(context, text);
    register_toolset_generators(context, name);
  }
}

}  // namespace forgevar
