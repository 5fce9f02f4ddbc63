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

#include "forgevar/property.hpp"

#include <algorithm>
#include <stdexcept>

#include "forgevar/error.hpp"

namespace forgevar {

namespace {

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
}

bool valid_feature_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_name_char);
}

// Values end up in paths and in whitespace-delimited buildfiles.
bool valid_value_text(std::string_view value) {
  if (value.empty()) return false;
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '=' ||
        c == '/' || c == '\\' || c == ':' || c == ',') {
      return false;
    }
  }
  return true;
}

}  // namespace

bool FeatureDefinition::allows(std::string_view value) const {
  if (is_free()) return valid_value_text(value);
  return std::find(values.begin(), values.end(), value) != values.end();
}

std::string to_string(const Property& p) { return p.feature + "=" + p.value; }

PropertySet::PropertySet(std::initializer_list<Property> props) {
  for (const auto& p : props) set(p);
}

void PropertySet::set(const Property& p) { values_[p.feature] = p.value; }

void PropertySet::set(std::string feature, std::string value) {
  values_[std::move(feature)] = std::move(value);
}

void PropertySet::erase(const std::string& feature) { values_.erase(feature); }

std::optional<std::string> PropertySet::get(const std::string& feature) const {
  auto it = values_.find(feature);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool PropertySet::contains(const Property& p) const {
  auto it = values_.find(p.feature);
  return it != values_.end() && it->second == p.value;
}

std::vector<Property> PropertySet::properties() const {
  std::vector<Property> out;
  out.reserve(values_.size());
  for (const auto& [f, v] : values_) out.push_back({f, v});
  return out;
}

Requirement Requirement::simple(std::vector<Property> consequents) {
  Requirement r;
  r.kind = RequirementKind::Simple;
  r.consequents = std::move(consequents);
  return r;
}

Requirement Requirement::conditional(std::vector<Property> condition,
                                     std::vector<Property> consequents) {
  Requirement r;
  r.kind = RequirementKind::Conditional;
  r.condition = std::move(condition);
  r.consequents = std::move(consequents);
  return r;
}

Requirement Requirement::indirect(std::string rule_name) {
  Requirement r;
  r.kind = RequirementKind::Indirect;
  r.rule_name = std::move(rule_name);
  return r;
}

namespace {

std::string join_properties(const std::vector<Property>& props) {
  std::string out;
  for (const auto& p : props) {
    if (!out.empty()) out += ',';
    out += to_string(p);
  }
  return out;
}

}  // namespace

std::string to_string(const Requirement& r) {
  switch (r.kind) {
    case RequirementKind::Simple:
      return join_properties(r.consequents);
    case RequirementKind::Conditional:
      return join_properties(r.condition) + ":" + join_properties(r.consequents);
    case RequirementKind::Indirect:
      return "@" + r.rule_name;
  }
  return {};
}

std::string host_target_os() {
#if defined(_WIN32)
  return "windows";
#else
  return "linux";
#endif
}

FeatureRegistry FeatureRegistry::with_builtin_features() {
  FeatureRegistry r;
  r.register_feature({"toolset", {"gcc", "msvc", "mockcc"}, std::nullopt,
                      PathMode::ValueOnly});
  r.register_feature({"variant", {"debug", "release"}, "debug", PathMode::ValueOnly});
  r.register_feature({"link", {"shared", "static"}, "shared", PathMode::NameValue});
  r.register_feature({"optimization", {"none", "speed", "space"}, "none",
                      PathMode::NameValue});
  r.register_feature({"profiling", {"off", "on"}, "off", PathMode::NameValue});
  r.register_feature({"target-os", {"linux", "windows"}, host_target_os(),
                      PathMode::NameValue});
  return r;
}

void FeatureRegistry::register_feature(FeatureDefinition def) {
  if (!valid_feature_name(def.name)) {
    throw Error(ErrorKind::MalformedProperty, "invalid feature name '" + def.name + "'");
  }
  if (index_.count(def.name) != 0) {
    throw Error(ErrorKind::DuplicateFeature, "feature '" + def.name + "' already registered");
  }
  std::vector<std::string> seen;
  for (const auto& v : def.values) {
    if (!valid_value_text(v)) {
      throw Error(ErrorKind::UnknownValue,
                  "invalid value '" + v + "' for feature '" + def.name + "'");
    }
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
      throw Error(ErrorKind::UnknownValue,
                  "duplicate value '" + v + "' for feature '" + def.name + "'");
    }
    seen.push_back(v);
  }
  if (def.default_value && !def.allows(*def.default_value)) {
    throw Error(ErrorKind::InvalidDefault, "default '" + *def.default_value +
                                               "' is not a value of feature '" +
                                               def.name + "'");
  }
  def.registration_index = definitions_.size();
  index_.emplace(def.name, definitions_.size());
  definitions_.push_back(std::move(def));
}

void FeatureRegistry::extend_feature(const std::string& name, const std::string& value) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownFeature, "unknown feature '" + name + "'");
  }
  auto& def = definitions_[it->second];
  if (def.is_free()) return;
  if (!valid_value_text(value)) {
    throw Error(ErrorKind::UnknownValue, "invalid value '" + value + "'");
  }
  if (!def.allows(value)) def.values.push_back(value);
}

void FeatureRegistry::register_adjuster(std::string rule_name, Adjuster adjuster) {
  adjusters_[std::move(rule_name)] = std::move(adjuster);
}

const FeatureDefinition* FeatureRegistry::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return nullptr;
  return &definitions_[it->second];
}

const FeatureDefinition& FeatureRegistry::at(std::string_view name) const {
  if (const auto* def = find(name)) return *def;
  throw Error(ErrorKind::UnknownFeature, "unknown feature '" + std::string(name) + "'");
}

const Adjuster* FeatureRegistry::find_adjuster(const std::string& rule_name) const {
  auto it = adjusters_.find(rule_name);
  return it == adjusters_.end() ? nullptr : &it->second;
}

void FeatureRegistry::validate(const Property& p) const {
  const auto& def = at(p.feature);
  if (!def.allows(p.value)) {
    throw Error(ErrorKind::UnknownValue,
                "'" + p.value + "' is not a valid value of feature '" + p.feature + "'");
  }
}

void FeatureRegistry::validate(const PropertySet& set) const {
  for (const auto& [f, v] : set.values()) validate(Property{f, v});
}

std::string FeatureRegistry::canonical_string(const PropertySet& set) const {
  std::vector<std::pair<std::size_t, Property>> ordered;
  for (const auto& [f, v] : set.values()) {
    const auto* def = find(f);
    ordered.push_back({def ? def->registration_index : definitions_.size(), {f, v}});
  }
  std::sort(ordered.begin(), ordered.end());
  std::string out;
  for (const auto& [idx, p] : ordered) {
    if (!out.empty()) out += ' ';
    out += to_string(p);
  }
  return out;
}

Property split_property(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || text.find('=', eq + 1) != std::string_view::npos) {
    throw Error(ErrorKind::MalformedProperty,
                "expected feature=value, got '" + std::string(text) + "'");
  }
  Property p{std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
  if (!valid_feature_name(p.feature) || p.value.empty() ||
      p.value.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorKind::MalformedProperty,
                "expected feature=value, got '" + std::string(text) + "'");
  }
  return p;
}

Property parse_property(const FeatureRegistry& registry, std::string_view text) {
  Property p = split_property(text);
  registry.validate(p);
  return p;
}

PropertySet refine(const FeatureRegistry& registry, const PropertySet& base,
                   const std::vector<Requirement>& requirements) {
  PropertySet current = base;

  std::vector<const Requirement*> conditionals;
  std::vector<const Requirement*> indirects;
  for (const auto& r : requirements) {
    switch (r.kind) {
      case RequirementKind::Simple:
        for (const auto& p : r.consequents) current.set(p);
        break;
      case RequirementKind::Conditional:
        conditionals.push_back(&r);
        break;
      case RequirementKind::Indirect:
        indirects.push_back(&r);
        break;
    }
  }

  if (!conditionals.empty()) {
    const std::size_t pass_limit = conditionals.size() + 1;
    bool changed = true;
    for (std::size_t pass = 0; pass < pass_limit && changed; ++pass) {
      changed = false;
      for (const auto* r : conditionals) {
        bool holds = std::all_of(r->condition.begin(), r->condition.end(),
                                 [&](const Property& c) { return current.contains(c); });
        if (!holds) continue;
        for (const auto& p : r->consequents) {
          if (!current.contains(p)) {
            current.set(p);
            changed = true;
          }
        }
      }
    }
    if (changed) {
      throw Error(ErrorKind::NonConvergingConditionals,
                  "conditional requirements did not converge after " +
                      std::to_string(pass_limit) + " passes");
    }
  }

  for (const auto* r : indirects) {
    const Adjuster* adjuster = registry.find_adjuster(r->rule_name);
    if (adjuster == nullptr) {
      throw Error(ErrorKind::UnknownAdjuster, "no adjuster named '" + r->rule_name + "'");
    }
    for (const auto& p : (*adjuster)(current)) {
      registry.validate(p);
      current.set(p);
    }
  }

  registry.validate(current);
  return current;
}

PropertySet expand_defaults(const FeatureRegistry& registry, const PropertySet& p) {
  PropertySet out = p;
  for (const auto& def : registry.definitions()) {
    if (def.default_value && !out.has(def.name)) out.set(def.name, *def.default_value);
  }
  return out;
}

std::string property_path(const FeatureRegistry& registry, const PropertySet& p) {
  std::string path;
  auto append = [&](const std::string& segment) {
    if (!path.empty()) path += '/';
    path += segment;
  };
  for (const auto& def : registry.definitions()) {
    auto value = p.get(def.name);
    switch (def.path_mode) {
      case PathMode::Hidden:
        break;
      case PathMode::ValueOnly:
        if (!value) {
          throw Error(ErrorKind::MissingRequiredFeature,
                      "feature '" + def.name + "' must be specified (e.g. " + def.name +
                          "=" + (def.values.empty() ? "<value>" : def.values.front()) + ")");
        }
        append(*value);
        break;
      case PathMode::NameValue:
        if (value && value != def.default_value) append(def.name + "-" + *value);
        break;
    }
  }
  return path;
}

}  // namespace forgevar
