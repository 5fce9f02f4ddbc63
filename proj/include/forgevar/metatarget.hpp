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
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "forgevar/buildfile.hpp"
#include "forgevar/graph.hpp"
#include "forgevar/property.hpp"
#include "forgevar/toolset.hpp"

namespace forgevar {

struct FileSource {
  std::string path;
  friend bool operator==(const FileSource&, const FileSource&) = default;
};

struct MetatargetRef {
  std::string name;
  friend bool operator==(const MetatargetRef&, const MetatargetRef&) = default;
};

using SourceRef = std::variant<FileSource, MetatargetRef>;

/// A declaration that is only turned into concrete targets once a build
/// request arrives.
struct Metatarget {
  std::string name;
  TargetType target_type;
  std::vector<SourceRef> sources;
  std::vector<Requirement> requirements;

  friend bool operator==(const Metatarget&, const Metatarget&) = default;
};

/// The metatargets and project requirements of one Buildfile.
class Project {
 public:
  /// Throws DuplicateMetatarget. A bare source word naming another metatarget
  /// (declared before or after) is a reference; anything else is a file.
  void declare(const FeatureRegistry& registry, const Declaration& declaration);
  void declare(const FeatureRegistry& registry, Metatarget metatarget);

  void add_project_requirements(const FeatureRegistry& registry,
                                const std::vector<Requirement>& requirements);

  const Metatarget* find(const std::string& name) const;
  const std::vector<Metatarget>& metatargets() const { return metatargets_; }
  const std::vector<Requirement>& project_requirements() const { return project_requirements_; }

 private:
  std::vector<Metatarget> metatargets_;
  std::vector<Requirement> project_requirements_;
};

struct EvaluationCounters {
  std::size_t evaluate_calls = 0;
  /// Memo misses, i.e. closure invocations that reached dispatch.
  std::size_t closure_invocations = 0;
  std::size_t memo_hits = 0;
  std::map<std::string, std::size_t> invocations_by_name;
};

/// Evaluates metatargets against build requests, memoized on
/// (name, effective properties).
class Evaluator {
 public:
  Evaluator(const BuildContext& context, const Project& project)
      : context_(context), project_(project) {}

  /// Effective properties: defaults, then project requirements, then the
  /// metatarget's own requirements, then defaults again.
  PropertySet effective_properties(const Metatarget& metatarget,
                                   const PropertySet& request) const;

  /// The first element is the metatarget's primary product; the rest is
  /// its full subgraph, including referenced metatargets.
  const std::vector<ConcreteTarget>& evaluate(const std::string& name, const PropertySet& request);

  const EvaluationCounters& counters() const { return counters_; }

 private:
  using Key = std::pair<std::string, PropertySet>;

  const BuildContext& context_;
  const Project& project_;
  std::map<Key, std::vector<ConcreteTarget>> memo_;
  std::vector<std::string> in_progress_;
  EvaluationCounters counters_;
};

}  // namespace forgevar
