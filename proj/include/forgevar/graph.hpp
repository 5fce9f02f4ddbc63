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
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace forgevar {

/// Metatarget and file types ("LIB", "EXE", "OBJ", "CPP", ...). Open-ended so
/// toolset modules can introduce their own.
using TargetType = std::string;

/// One buildable file. Paths are relative to the workspace root.
struct ConcreteTarget {
  std::string path;
  TargetType type;
  std::vector<std::string> dependencies;
  std::string command;
  std::string template_name;

  friend bool operator==(const ConcreteTarget&, const ConcreteTarget&) = default;
};

class TargetGraph {
 public:
  /// Re-adding an identical node is a no-op; a different command or
  /// dependency list for an existing path throws ConflictingTarget.
  void add_target(const ConcreteTarget& target);

  const ConcreteTarget* find(const std::string& path) const;
  const std::map<std::string, ConcreteTarget>& targets() const { return targets_; }
  std::size_t size() const { return targets_.size(); }

  /// Throws CyclicGraph naming the cycle.
  void check_acyclic() const;

  /// Direct dependents of every node.
  std::map<std::string, std::vector<std::string>> dependents() const;

 private:
  std::map<std::string, ConcreteTarget> targets_;
};

/// SHA-256 of `bytes`, lowercase hex.
std::string sha256_hex(std::string_view bytes);

/// Hex digest of a file's contents, or nullopt if it cannot be read.
std::optional<std::string> file_digest(const std::filesystem::path& path);

/// Digest over the command and the sorted (dependency path, dependency digest)
/// pairs.
std::string compute_fingerprint(const std::string& command,
                                std::vector<std::pair<std::string, std::string>> deps);

/// Persisted fingerprints, one `path<TAB>digest` line each, sorted by path.
class StateStore {
 public:
  StateStore() = default;
  explicit StateStore(std::filesystem::path file) : file_(std::move(file)) {}

  /// Reads the file if it exists. Throws StateStoreIO on malformed contents.
  static StateStore load(const std::filesystem::path& file);

  /// Writes a temporary file and renames it over the target.
  void save() const;

  std::optional<std::string> get(const std::string& path) const;
  void set(const std::string& path, std::string digest);
  void erase(const std::string& path);

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::filesystem::path& file() const { return file_; }

  friend bool operator==(const StateStore& a, const StateStore& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::filesystem::path file_;
  std::map<std::string, std::string> entries_;
};

/// Current fingerprint of `target`; throws MissingSource when a dependency
/// is neither a graph node nor a readable file. A graph-node dependency that
/// has not been built yet yields nullopt.
std::optional<std::string> current_fingerprint(const TargetGraph& graph,
                                               const ConcreteTarget& target,
                                               const std::filesystem::path& root);

/// True iff the target file is missing or its stored fingerprint differs from
/// the current one.
bool out_of_date(const TargetGraph& graph, const StateStore& store,
                 const ConcreteTarget& target, const std::filesystem::path& root);

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

/// Runs one rendered command with `root` as the working directory.
using CommandRunner =
    std::function<CommandResult(const std::string& command, const std::filesystem::path& root)>;

/// `@`-prefixed commands go to the built-in interpreter, everything else to
/// /bin/sh.
CommandResult run_command(const std::string& command, const std::filesystem::path& root);

/// Interprets `@concat -o <target> -- <sources...> -- <extra...>` and
/// `@fail [message]`.
CommandResult run_pseudo_command(const std::string& command, const std::filesystem::path& root);

struct FailedTarget {
  std::string path;
  int exit_code = 0;
  std::string output;

  friend bool operator==(const FailedTarget&, const FailedTarget&) = default;
};

struct SkippedTarget {
  std::string path;
  std::string blocked_by;

  friend bool operator==(const SkippedTarget&, const SkippedTarget&) = default;
};

/// All lists are sorted by path.
struct BuildReport {
  std::vector<std::string> built;
  std::vector<FailedTarget> failed;
  std::vector<SkippedTarget> skipped;
  std::vector<std::string> up_to_date;
  std::size_t up_to_date_count = 0;

  friend bool operator==(const BuildReport&, const BuildReport&) = default;
};

struct ExecuteOptions {
  int jobs = 1;
  bool dry_run = false;
  std::filesystem::path root = ".";
  /// Command echo, failure output and the final summary. Null silences them.
  std::ostream* log = nullptr;
  CommandRunner runner = run_command;
};

/// Runs every out-of-date target in dependency order with up to `jobs`
/// commands at once, continuing past failures. Successful fingerprints are
/// written back to `store` and saved (unless dry_run).
BuildReport execute(const TargetGraph& graph, StateStore& store, const ExecuteOptions& options);

/// FAILED lines, SKIPPED lines, then the tally line.
std::string format_summary(const BuildReport& report);

}  // namespace forgevar
