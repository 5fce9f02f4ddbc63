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

#include "forgevar/generator.hpp"

#include <algorithm>
#include <filesystem>

#include "forgevar/error.hpp"
#include "forgevar/toolset.hpp"

namespace forgevar {

SourceTypeTable SourceTypeTable::standard() {
  SourceTypeTable t;
  t.add(".c", "CPP");
  t.add(".cpp", "CPP");
  t.add(".cc", "CPP");
  t.add(".s", "ASM");
  t.add(".o", "OBJ", "linux");
  t.add(".a", "LIB", "linux");
  t.add(".so", "LIB", "linux");
  t.add(".obj", "OBJ", "windows");
  t.add(".lib", "LIB", "windows");
  t.add(".dll", "LIB", "windows");
  return t;
}

void SourceTypeTable::add(std::string extension, TargetType type, std::string target_os) {
  table_[{std::move(extension), std::move(target_os)}] = std::move(type);
}

std::optional<TargetType> SourceTypeTable::type_of(const std::string& path,
                                                   const std::string& target_os) const {
  std::string ext = std::filesystem::path(path).extension().string();
  if (ext.empty()) return std::nullopt;
  if (auto it = table_.find({ext, target_os}); it != table_.end()) return it->second;
  if (auto it = table_.find({ext, "*"}); it != table_.end()) return it->second;
  return std::nullopt;
}

void GeneratorRegistry::register_generator(GeneratorSpec spec) {
  if (find(spec.id) != nullptr) {
    throw Error(ErrorKind::DuplicateGenerator, "generator '" + spec.id + "' already registered");
  }
  if (spec.template_name.empty()) spec.template_name = spec.id;
  generators_.push_back(std::move(spec));
}

const GeneratorSpec* GeneratorRegistry::find(const std::string& id) const {
  auto it = std::find_if(generators_.begin(), generators_.end(),
                         [&](const GeneratorSpec& g) { return g.id == id; });
  return it == generators_.end() ? nullptr : &*it;
}

std::vector<const GeneratorSpec*> GeneratorRegistry::viable(const TargetType& target_type,
                                                            const PropertySet& properties) const {
  std::vector<const GeneratorSpec*> out;
  for (const auto& g : generators_) {
    if (g.target_type != target_type) continue;
    const auto& required = g.required.values();
    bool ok = std::all_of(required.begin(), required.end(), [&](const auto& kv) {
      return properties.contains(Property{kv.first, kv.second});
    });
    if (ok) out.push_back(&g);
  }
  return out;
}

std::vector<ConcreteTarget> GeneratorRegistry::dispatch(const BuildContext& context,
                                                        const TargetType& target_type,
                                                        const std::string& name,
                                                        const PropertySet& properties,
                                                        const std::vector<SourceFile>& sources) const {
  auto candidates = viable(target_type, properties);
  std::vector<std::pair<const GeneratorSpec*, std::vector<ConcreteTarget>>> succeeded;
  for (const auto* g : candidates) {
    if (!g->construct) continue;
    auto result = g->construct(GeneratorCall{context, *g, name, properties, sources});
    if (result && !result->empty()) succeeded.emplace_back(g, std::move(*result));
  }

  const std::string where = target_type + " '" + name + "' with properties {" +
                            context.features.canonical_string(properties) + "}";
  if (succeeded.empty()) {
    std::string why = candidates.empty()
                          ? "no generator is registered for these properties"
                          : std::to_string(candidates.size()) +
                                " viable generator(s) declined the sources";
    throw Error(ErrorKind::NoViableGenerator, "cannot build " + where + ": " + why);
  }
  if (succeeded.size() > 1) {
    std::string ids;
    for (const auto& [g, targets] : succeeded) {
      if (!ids.empty()) ids += ", ";
      ids += g->id;
    }
    throw Error(ErrorKind::AmbiguousGenerators,
                "ambiguous generators for " + where + ": " + ids);
  }
  return std::move(succeeded.front().second);
}

}  // namespace forgevar
