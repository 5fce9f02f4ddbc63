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

#include "forgevar/driver.hpp"

#include <fstream>
#include <sstream>

#include "forgevar/error.hpp"

namespace fs = std::filesystem;

namespace forgevar {

namespace {

constexpr const char* kBuildfileName = "Buildfile";
constexpr const char* kStateFile = ".forgevar/state";

std::string read_buildfile(const fs::path& root) {
  std::ifstream in(root / kBuildfileName, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Usage, std::string("no ") + kBuildfileName + " in " + root.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void load_project(BuildContext& context, Project& project, std::string_view text) {
  for (const auto& statement : parse_buildfile(text)) {
    try {
      if (const auto* d = std::get_if<Declaration>(&statement)) {
        project.declare(context.features, *d);
      } else if (const auto* a = std::get_if<ActionsDef>(&statement)) {
        context.toolkit.define_action({a->name, a->body, a->line});
      } else if (const auto* f = std::get_if<FlagsDef>(&statement)) {
        context.toolkit.add_flag_rule(context.features,
                                      {f->template_name, f->variable, f->condition, f->values});
      } else {
        project.add_project_requirements(context.features,
                                         std::get<ProjectRequirements>(statement).requirements);
      }
    } catch (const Error& e) {
      if (e.line()) throw;
      throw Error(e.kind(), e.message(), statement_line(statement));
    }
  }
}

InvocationConfig make_config(const CommandLine& cl, const fs::path& root) {
  InvocationConfig config;
  config.jobs = cl.options.jobs;
  config.dry_run = cl.options.dry_run;
  config.list_targets = cl.options.list_targets;
  config.requests = cl.requests;
  config.workspace_root = root;
  return config;
}

}  // namespace

InvocationResult invoke(const std::vector<std::string>& args, const fs::path& workspace_root,
                        std::ostream& out, std::ostream& err, const ContextSetup& setup) {
  InvocationResult result;
  try {
    BuildContext context;
    load_builtin_toolsets(context);
    if (setup) setup(context);

    const InvocationConfig config =
        make_config(parse_command_line(context.features, args), workspace_root);

    Project project;
    load_project(context, project, read_buildfile(config.workspace_root));

    if (config.list_targets) {
      for (const auto& m : project.metatargets()) out << m.name << ' ' << m.target_type << '\n';
      return result;
    }

    Evaluator evaluator(context, project);
    for (const auto& request : config.requests) {
      std::vector<std::string> names = request.targets;
      if (names.empty()) {
        for (const auto& m : project.metatargets()) names.push_back(m.name);
      }
      for (const auto& name : names) {
        for (const auto& target : evaluator.evaluate(name, request.properties)) {
          result.graph.add_target(target);
        }
      }
    }
    result.counters = evaluator.counters();

    StateStore store = StateStore::load(config.workspace_root / kStateFile);
    ExecuteOptions options;
    options.jobs = config.jobs;
    options.dry_run = config.dry_run;
    options.root = config.workspace_root;
    options.log = &out;
    result.report = execute(result.graph, store, options);
    result.exit_code = result.report->failed.empty() ? kExitSuccess : kExitBuildFailed;
  } catch (const Error& e) {
    err << "forgevar: ";
    if (e.line()) err << kBuildfileName << ':' << *e.line() << ": ";
    err << "error: " << e.message() << '\n';
    result.exit_code = kExitUsage;
  }
  return result;
}

}  // namespace forgevar
