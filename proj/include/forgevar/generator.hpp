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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forgevar/graph.hpp"
#include "forgevar/property.hpp"

namespace forgevar {

struct BuildContext;
struct GeneratorSpec;

/// A source handed to a generator, already classified.
struct SourceFile {
  std::string path;
  TargetType type;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

struct GeneratorCall {
  const BuildContext& context;
  const GeneratorSpec& generator;
  const std::string& name;
  const PropertySet& properties;
  const std::vector<SourceFile>& sources;
};

/// Returns nullopt (or an empty list) to decline. The first target of a
/// non-empty result is the primary product.
using ConstructFn = std::function<std::optional<std::vector<ConcreteTarget>>(const GeneratorCall&)>;

struct GeneratorSpec {
  std::string id;
  TargetType target_type;
  PropertySet required;
  TargetType consumes;
  std::string template_name;
  ConstructFn construct;
};

/// Maps file extensions to source types, optionally per target-os.
class SourceTypeTable {
 public:
  static SourceTypeTable standard();

  /// `target_os` of "*" applies to every OS.
  void add(std::string extension, TargetType type, std::string target_os = "*");
  std::optional<TargetType> type_of(const std::string& path, const std::string& target_os) const;

 private:
  std::map<std::pair<std::string, std::string>, TargetType> table_;
};

class GeneratorRegistry {
 public:
  /// Throws DuplicateGenerator.
  void register_generator(GeneratorSpec spec);

  const GeneratorSpec* find(const std::string& id) const;
  const std::vector<GeneratorSpec>& generators() const { return generators_; }

  /// Generators of `target_type` whose required properties all appear in
  /// `properties`, in registration order.
  std::vector<const GeneratorSpec*> viable(const TargetType& target_type,
                                           const PropertySet& properties) const;

  /// Calls every viable generator and returns the targets of the single one
  /// that succeeds. Throws NoViableGenerator or AmbiguousGenerators.
  std::vector<ConcreteTarget> dispatch(const BuildContext& context, const TargetType& target_type,
                                       const std::string& name, const PropertySet& properties,
                                       const std::vector<SourceFile>& sources) const;

 private:
  std::vector<GeneratorSpec> generators_;
};

}  // namespace forgevar
