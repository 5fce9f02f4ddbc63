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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forgevar/generator.hpp"
#include "forgevar/graph.hpp"
#include "forgevar/property.hpp"

namespace forgevar {

/// A command template with `$(VAR)` placeholders. TARGET and SOURCES are
/// bound by the renderer; every other variable comes from flag rules.
struct ActionTemplate {
  std::string name;
  std::string body;
  int line = 0;
};

/// When every condition property holds, `additions` are appended to
/// `variable` for commands rendered from `template_name`.
struct FlagRule {
  std::string template_name;
  std::string variable;
  std::vector<Property> condition;
  std::vector<std::string> additions;
};

inline constexpr std::string_view kAnyLink = "*";

struct NamingRule {
  TargetType target_type;
  std::string target_os;
  std::string link = std::string(kAnyLink);
  std::string prefix;
  std::string suffix;
};

using VariableBindings = std::map<std::string, std::vector<std::string>>;

/// Every variable mentioned by a rule for `template_name` is present in the
/// result, possibly with an empty list.
VariableBindings bind_variables(const std::vector<FlagRule>& rules,
                                const std::string& template_name,
                                const PropertySet& properties);

std::string render_command(const ActionTemplate& action, const VariableBindings& bindings,
                           const std::string& target_path,
                           const std::vector<std::string>& source_paths);

std::string target_file_name(const std::vector<NamingRule>& rules, const std::string& base_name,
                             const TargetType& target_type, const PropertySet& properties);

/// lib/.so, lib/.a, .dll, .lib, .exe, .o and .obj conventions.
std::vector<NamingRule> default_naming_rules();

/// Action templates, flag rules and naming rules contributed by toolset
/// modules and buildfiles.
class Toolkit {
 public:
  /// A later definition with the same name replaces the earlier one.
  void define_action(ActionTemplate action);
  /// Validates the condition and rejects the reserved variables.
  void add_flag_rule(const FeatureRegistry& registry, FlagRule rule);
  /// Keeps one rule per (type, os, link); a later rule replaces an earlier.
  void add_naming_rule(NamingRule rule);

  const ActionTemplate* find_action(const std::string& name) const;
  const std::vector<FlagRule>& flag_rules() const { return flag_rules_; }
  const std::vector<NamingRule>& naming_rules() const { return naming_rules_; }

  /// Renders `template_name` for one target. Throws UnknownTemplate.
  std::string render(const std::string& template_name, const PropertySet& properties,
                     const std::string& target_path,
                     const std::vector<std::string>& source_paths) const;

 private:
  std::map<std::string, ActionTemplate> actions_;
  std::vector<FlagRule> flag_rules_;
  std::vector<NamingRule> naming_rules_;
};

/// Everything a build needs besides the project description.
struct BuildContext {
  FeatureRegistry features = FeatureRegistry::with_builtin_features();
  GeneratorRegistry generators;
  Toolkit toolkit;
  SourceTypeTable source_types = SourceTypeTable::standard();
  std::string build_root = "bin";
};

/// Object-file generator: one source of type `consumes` in, one OBJ out.
GeneratorSpec make_compile_generator(std::string id, PropertySet required,
                                     TargetType consumes = "CPP");

/// Link-style generator producing `target_type` from `consumes` inputs.
/// Sources of other types are dispatched to `consumes` first, except LIB
/// sources, which are linked directly.
GeneratorSpec make_link_generator(std::string id, TargetType target_type, PropertySet required,
                                  TargetType consumes = "OBJ");

/// Registers <toolset>.compile, .link, .link.dll and .archive, all requiring
/// toolset=<toolset>; .link.dll and .archive also require link=shared and
/// link=static.
void register_toolset_generators(BuildContext& context, const std::string& toolset);

/// Applies the `actions` and `flags` statements of a toolset module file.
void load_toolset_module(BuildContext& context, std::string_view module_text);

/// Names and texts of the toolset modules shipped with forgevar.
const std::map<std::string, std::string>& builtin_toolset_modules();

/// gcc, msvc and mockcc: module texts, generators and the default naming table.
void load_builtin_toolsets(BuildContext& context);

}  // namespace forgevar
