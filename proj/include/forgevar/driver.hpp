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

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "forgevar/buildfile.hpp"
#include "forgevar/graph.hpp"
#include "forgevar/metatarget.hpp"
#include "forgevar/toolset.hpp"

namespace forgevar {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitBuildFailed = 1;
inline constexpr int kExitUsage = 2;

struct InvocationConfig {
  int jobs = 1;
  bool dry_run = false;
  bool list_targets = false;
  std::vector<BuildRequest> requests;
  std::filesystem::path workspace_root;
};

/// Everything one invocation produced; `report` is empty when the build never
/// reached execution.
struct InvocationResult {
  int exit_code = kExitSuccess;
  std::optional<BuildReport> report;
  EvaluationCounters counters;
  TargetGraph graph;
};

/// Hook run after the built-in toolsets are loaded, before the Buildfile is
/// read. Lets embedders register extra toolsets and adjusters.
using ContextSetup = std::function<void(BuildContext&)>;

/// The whole driver: toolsets, Buildfile, command line, evaluation of every
/// request, one merged graph, execution and the summary.
InvocationResult invoke(const std::vector<std::string>& args,
                        const std::filesystem::path& workspace_root, std::ostream& out,
                        std::ostream& err, const ContextSetup& setup = {});

inline int run(const std::vector<std::string>& args, const std::filesystem::path& workspace_root,
               std::ostream& out, std::ostream& err) {
  return invoke(args, workspace_root, out, err).exit_code;
}

}  // namespace forgevar
