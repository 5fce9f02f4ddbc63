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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forgevar {

/// How a feature shows up in a variant directory.
enum class PathMode {
  ValueOnly,  // "debug"
  NameValue,  // "link-static"
  Hidden,
};

struct FeatureDefinition {
  std::string name;
  /// Allowed values. Empty means the feature takes free-form strings.
  std::vector<std::string> values;
  std::optional<std::string> default_value;
  PathMode path_mode = PathMode::NameValue;
  std::size_t registration_index = 0;

  bool is_free() const { return values.empty(); }
  bool allows(std::string_view value) const;
};

struct Property {
  std::string feature;
  std::string value;

  friend bool operator==(const Property&, const Property&) = default;
  friend auto operator<=>(const Property&, const Property&) = default;
};

/// `feature=value`.
std::string to_string(const Property& p);

/// At most one value per feature. Iteration order is by feature name; use
/// FeatureRegistry::canonical_string for registration-ordered display.
class PropertySet {
 public:
  PropertySet() = default;
  PropertySet(std::initializer_list<Property> props);

  /// Replaces any existing value for the same feature.
  void set(const Property& p);
  void set(std::string feature, std::string value);
  void erase(const std::string& feature);

  std::optional<std::string> get(const std::string& feature) const;
  bool contains(const Property& p) const;
  bool has(const std::string& feature) const { return values_.count(feature) != 0; }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

  std::vector<Property> properties() const;
  const std::map<std::string, std::string>& values() const { return values_; }

  friend bool operator==(const PropertySet&, const PropertySet&) = default;
  friend auto operator<=>(const PropertySet&, const PropertySet&) = default;

 private:
  std::map<std::string, std::string> values_;
};

enum class RequirementKind { Simple, Conditional, Indirect };

struct Requirement {
  RequirementKind kind = RequirementKind::Simple;
  std::vector<Property> condition;
  std::vector<Property> consequents;
  std::string rule_name;

  static Requirement simple(std::vector<Property> consequents);
  static Requirement conditional(std::vector<Property> condition,
                                 std::vector<Property> consequents);
  static Requirement indirect(std::string rule_name);

  friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// Buildfile spelling: `f=v`, `a=1,b=2:c=3`, or `@rule`.
std::string to_string(const Requirement& r);

using Adjuster = std::function<std::vector<Property>(const PropertySet&)>;

/// The closed vocabulary of build features plus the named adjusters used by
/// indirect requirements.
class FeatureRegistry {
 public:
  FeatureRegistry() = default;

  /// Registry preloaded with toolset, variant, link, optimization,
  /// profiling and target-os.
  static FeatureRegistry with_builtin_features();

  void register_feature(FeatureDefinition def);
  /// Adds one more allowed value to a closed feature (new toolsets do this).
  void extend_feature(const std::string& name, const std::string& value);
  void register_adjuster(std::string rule_name, Adjuster adjuster);

  const FeatureDefinition* find(std::string_view name) const;
  const FeatureDefinition& at(std::string_view name) const;
  const std::vector<FeatureDefinition>& definitions() const { return definitions_; }
  const Adjuster* find_adjuster(const std::string& rule_name) const;

  /// Throws UnknownFeature / UnknownValue.
  void validate(const Property& p) const;
  void validate(const PropertySet& set) const;

  /// Space-separated `f=v` list ordered by registration index.
  std::string canonical_string(const PropertySet& set) const;

 private:
  std::vector<FeatureDefinition> definitions_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, Adjuster> adjusters_;
};

/// Value of target-os on the machine running the build.
std::string host_target_os();

/// Parses `feature=value` and validates it against the registry.
Property parse_property(const FeatureRegistry& registry, std::string_view text);

/// Syntactic split of `feature=value` without registry validation.
Property split_property(std::string_view text);

/// Applies simple requirements, then conditionals to a fixed point, then
/// indirect adjusters (once each, in order). The result is validated.
PropertySet refine(const FeatureRegistry& registry, const PropertySet& base,
                   const std::vector<Requirement>& requirements);

/// Fills in the default of every feature that has one and is unset.
PropertySet expand_defaults(const FeatureRegistry& registry, const PropertySet& p);

/// Relative variant directory for a default-expanded set, e.g. "gcc/debug"
/// or "gcc/debug/link-static".
std::string property_path(const FeatureRegistry& registry, const PropertySet& p);

}  // namespace forgevar
