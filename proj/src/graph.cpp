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

#include "forgevar/graph.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "forgevar/error.hpp"

namespace fs = std::filesystem;

namespace forgevar {

void TargetGraph::add_target(const ConcreteTarget& target) {
  auto it = targets_.find(target.path);
  if (it == targets_.end()) {
    targets_.emplace(target.path, target);
    return;
  }
  const ConcreteTarget& existing = it->second;
  if (existing.command != target.command || existing.dependencies != target.dependencies) {
    throw Error(ErrorKind::ConflictingTarget,
                "two different ways to build '" + target.path + "':\n  " + existing.command +
                    "\n  " + target.command);
  }
}

const ConcreteTarget* TargetGraph::find(const std::string& path) const {
  auto it = targets_.find(path);
  return it == targets_.end() ? nullptr : &it->second;
}

void TargetGraph::check_acyclic() const {
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> marks;
  std::vector<std::string> stack;

  std::function<void(const std::string&)> visit = [&](const std::string& path) {
    auto& mark = marks[path];
    if (mark == Mark::Done) return;
    if (mark == Mark::Active) {
      auto from = std::find(stack.begin(), stack.end(), path);
      std::string cycle;
      for (auto it = from; it != stack.end(); ++it) cycle += *it + " -> ";
      throw Error(ErrorKind::CyclicGraph, "dependency cycle: " + cycle + path);
    }
    mark = Mark::Active;
    stack.push_back(path);
    for (const auto& dep : targets_.at(path).dependencies) {
      if (targets_.count(dep)) visit(dep);
    }
    stack.pop_back();
    marks[path] = Mark::Done;
  };
  for (const auto& [path, t] : targets_) visit(path);
}

std::map<std::string, std::vector<std::string>> TargetGraph::dependents() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [path, t] : targets_) {
    out[path];
    for (const auto& dep : t.dependencies) {
      if (!targets_.count(dep)) continue;
      auto& list = out[dep];
      if (std::find(list.begin(), list.end(), path) == list.end()) list.push_back(path);
    }
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::optional<std::string> file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

std::string compute_fingerprint(const std::string& command,
                                std::vector<std::pair<std::string, std::string>> deps) {
  std::sort(deps.begin(), deps.end());
  std::string material = command;
  material += '\0';
  for (const auto& [path, digest] : deps) {
    material += path;
    material += '\0';
    material += digest;
    material += '\n';
  }
  return sha256_hex(material);
}

StateStore StateStore::load(const fs::path& file) {
  StateStore store(file);
  std::ifstream in(file);
  if (!in) return store;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw Error(ErrorKind::StateStoreIO,
                  "malformed state file " + file.string() + " at line " + std::to_string(line_no));
    }
    store.entries_[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return store;
}

void StateStore::save() const {
  if (file_.empty()) return;
  std::error_code ec;
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path(), ec);
  fs::path temp = file_;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::StateStoreIO, "cannot write " + temp.string());
    for (const auto& [path, digest] : entries_) out << path << '\t' << digest << '\n';
    if (!out.flush()) throw Error(ErrorKind::StateStoreIO, "cannot write " + temp.string());
  }
  fs::rename(temp, file_, ec);
  if (ec) throw Error(ErrorKind::StateStoreIO, "cannot replace " + file_.string() + ": " + ec.message());
}

std::optional<std::string> StateStore::get(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void StateStore::set(const std::string& path, std::string digest) {
  entries_[path] = std::move(digest);
}

void StateStore::erase(const std::string& path) { entries_.erase(path); }

std::optional<std::string> current_fingerprint(const TargetGraph& graph,
                                               const ConcreteTarget& target,
                                               const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> deps;
  for (const auto& dep : target.dependencies) {
    auto digest = file_digest(root / dep);
    if (!digest) {
      if (graph.find(dep) != nullptr) return std::nullopt;
      throw Error(ErrorKind::MissingSource,
                  "'" + dep + "' (needed by '" + target.path + "') does not exist");
    }
    deps.emplace_back(dep, std::move(*digest));
  }
  return compute_fingerprint(target.command, std::move(deps));
}

bool out_of_date(const TargetGraph& graph, const StateStore& store, const ConcreteTarget& target,
                 const fs::path& root) {
  auto fingerprint = current_fingerprint(graph, target, root);
  if (!fs::exists(root / target.path)) return true;
  if (!fingerprint) return true;
  return store.get(target.path) != fingerprint;
}

std::string format_summary(const BuildReport& report) {
  std::string out;
  for (const auto& f : report.failed) {
    out += "FAILED: " + f.path + " (exit " + std::to_string(f.exit_code) + ")\n";
  }
  for (const auto& s : report.skipped) {
    out += "SKIPPED: " + s.path + " (blocked by " + s.blocked_by + ")\n";
  }
  out += std::to_string(report.built.size()) + " built, " +
         std::to_string(report.up_to_date_count) + " up to date, " +
         std::to_string(report.failed.size()) + " failed, " +
         std::to_string(report.skipped.size()) + " skipped\n";
  return out;
}

}  // namespace forgevar
