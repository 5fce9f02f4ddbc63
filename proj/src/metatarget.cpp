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

#include "forgevar/metatarget.hpp"

#include <algorithm>

#include "forgevar/error.hpp"

namespace forgevar {

namespace {

TargetType type_for_rule(const std::string& rule) {
  if (rule == "lib") return "LIB";
  if (rule == "exe") return "EXE";
  if (rule == "obj") return "OBJ";
  throw Error(ErrorKind::UnknownRule, "'" + rule + "' does not declare a metatarget");
}

void validate_requirements(const FeatureRegistry& registry,
                           const std::vector<Requirement>& requirements) {
  for (const auto& r : requirements) {
    for (const auto& p : r.condition) registry.validate(p);
    for (const auto& p : r.consequents) registry.validate(p);
  }
}

}  // namespace

void Project::declare(const FeatureRegistry& registry, const Declaration& declaration) {
  try {
    Metatarget m;
    m.name = declaration.names.at(0);
    m.target_type = type_for_rule(declaration.rule);
    for (const auto& word : declaration.sources) {
      if (find(word) != nullptr) {
        m.sources.push_back(MetatargetRef{word});
      } else {
        m.sources.push_back(FileSource{word});
      }
    }
    m.requirements = declaration.requirements;
    declare(registry, std::move(m));
  } catch (const Error& e) {
    if (e.line()) throw;
    throw Error(e.kind(), e.message(), declaration.line);
  }
}

void Project::declare(const FeatureRegistry& registry, Metatarget metatarget) {
  if (find(metatarget.name) != nullptr) {
    throw Error(ErrorKind::DuplicateMetatarget,
                "metatarget '" + metatarget.name + "' is already declared");
  }
  for (const auto& s : metatarget.sources) {
    if (const auto* f = std::get_if<FileSource>(&s);
        f && f->path.find_first_of(" \t") != std::string::npos) {
      throw Error(ErrorKind::MalformedStatement,
                  "source path '" + f->path + "' contains whitespace, which is not supported");
    }
  }
  validate_requirements(registry, metatarget.requirements);

  for (auto& existing : metatargets_) {
    for (auto& s : existing.sources) {
      if (const auto* f = std::get_if<FileSource>(&s); f && f->path == metatarget.name) {
        s = MetatargetRef{metatarget.name};
      }
    }
  }
  metatargets_.push_back(std::move(metatarget));
}

void Project::add_project_requirements(const FeatureRegistry& registry,
                                       const std::vector<Requirement>& requirements) {
  validate_requirements(registry, requirements);
  project_requirements_.insert(project_requirements_.end(), requirements.begin(),
                               requirements.end());
}

const Metatarget* Project::find(const std::string& name) const {
  auto it = std::find_if(metatargets_.begin(), metatargets_.end(),
                         [&](const Metatarget& m) { return m.name == name; });
  return it == metatargets_.end() ? nullptr : &*it;
}

PropertySet Evaluator::effective_properties(const Metatarget& metatarget,
                                            const PropertySet& request) const {
  const auto& features = context_.features;
  PropertySet p = expand_defaults(features, request);
  p = refine(features, p, project_.project_requirements());
  p = refine(features, p, metatarget.requirements);
  return expand_defaults(features, p);
}

const std::vector<ConcreteTarget>& Evaluator::evaluate(const std::string& name,
                                                       const PropertySet& request) {
  ++counters_.evaluate_calls;
  const Metatarget* metatarget = project_.find(name);
  if (metatarget == nullptr) {
    throw Error(ErrorKind::UnknownMetatarget, "no metatarget named '" + name + "'");
  }
  if (std::find(in_progress_.begin(), in_progress_.end(), name) != in_progress_.end()) {
    std::string cycle;
    for (const auto& n : in_progress_) cycle += n + " -> ";
    throw Error(ErrorKind::CyclicMetatargetReference, "metatarget cycle: " + cycle + name);
  }

  PropertySet effective = effective_properties(*metatarget, request);
  // Surfaces MissingRequiredFeature (e.g. no toolset) before dispatch does.
  property_path(context_.features, effective);
  Key key{name, effective};
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++counters_.memo_hits;
    return it->second;
  }
  ++counters_.closure_invocations;
  ++counters_.invocations_by_name[name];

  in_progress_.push_back(name);
  struct Pop {
    std::vector<std::string>& stack;
    ~Pop() { stack.pop_back(); }
  } pop{in_progress_};

  const std::string target_os = effective.get("target-os").value_or(host_target_os());
  std::vector<SourceFile> sources;
  std::vector<ConcreteTarget> referenced;
  for (const auto& source : metatarget->sources) {
    if (const auto* file = std::get_if<FileSource>(&source)) {
      sources.push_back({file->path,
                         context_.source_types.type_of(file->path, target_os).value_or("")});
    } else {
      const auto& ref = std::get<MetatargetRef>(source);
      // Referenced metatargets see the original request and apply their
      // own requirements.
      const auto& targets = evaluate(ref.name, request);
      sources.push_back({targets.front().path, targets.front().type});
      referenced.insert(referenced.end(), targets.begin(), targets.end());
    }
  }

  std::vector<ConcreteTarget> result;
  try {
    result = context_.generators.dispatch(context_, metatarget->target_type, name, effective,
                                          sources);
  } catch (const Error& e) {
    throw Error(e.kind(), "in metatarget '" + name + "': " + e.message(), e.line());
  }
  for (auto& t : referenced) {
    bool seen = std::any_of(result.begin(), result.end(),
                            [&](const ConcreteTarget& r) { return r.path == t.path; });
    if (!seen) result.push_back(std::move(t));
  }
  return memo_.emplace(std::move(key), std::move(result)).first->second;
}

}  // namespace forgevar
