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

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <fstream>
#include <sstream>

#include "forgevar/graph.hpp"

namespace fs = std::filesystem;

namespace forgevar {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

CommandResult run_concat(const std::string& command, const std::vector<std::string>& words,
                         const fs::path& root) {
  // @concat -o <target> -- <sources...> -- <extra...>
  if (words.size() < 4 || words[1] != "-o" || words[3] != "--") {
    return {2, "@concat: expected '@concat -o <target> -- <sources> -- <options>'\n"};
  }
  const std::string& target = words[2];
  std::string contents = "#cmd: " + command + "\n";
  for (std::size_t i = 4; i < words.size() && words[i] != "--"; ++i) {
    std::ifstream in(root / words[i], std::ios::binary);
    if (!in) return {1, "@concat: cannot read '" + words[i] + "'\n"};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string bytes = buffer.str();
    if (bytes.rfind("@fail", 0) == 0) {
      return {1, words[i] + ": " + bytes.substr(0, bytes.find('\n')) + "\n"};
    }
    contents += bytes;
  }
  fs::path out = root / target;
  std::error_code ec;
  if (out.has_parent_path()) fs::create_directories(out.parent_path(), ec);
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file || !file.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
    return {1, "@concat: cannot write '" + target + "'\n"};
  }
  return {0, {}};
}

CommandResult run_shell(const std::string& command, const fs::path& root) {
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) return {127, "cannot create pipe\n"};
  const std::string dir = root.string();
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return {127, "cannot fork\n"};
  }
  if (pid == 0) {
    if (chdir(dir.c_str()) != 0) _exit(127);
    int null_in = open("/dev/null", O_RDONLY);
    if (null_in >= 0) dup2(null_in, 0);
    dup2(fds[1], 1);
    dup2(fds[1], 2);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  std::string output;
  char buffer[4096];
  while (true) {
    ssize_t n = read(fds[0], buffer, sizeof buffer);
    if (n > 0) {
      output.append(buffer, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  close(fds[0]);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) return {WEXITSTATUS(status), std::move(output)};
  if (WIFSIGNALED(status)) return {128 + WTERMSIG(status), std::move(output)};
  return {127, std::move(output)};
}

}  // namespace

CommandResult run_pseudo_command(const std::string& command, const fs::path& root) {
  auto words = split_words(command);
  if (words.empty()) return {0, {}};
  if (words[0] == "@concat") return run_concat(command, words, root);
  if (words[0] == "@fail") {
    std::string message = "@fail";
    for (std::size_t i = 1; i < words.size(); ++i) message += " " + words[i];
    return {1, message + "\n"};
  }
  return {127, "unknown pseudo-command '" + words[0] + "'\n"};
}

CommandResult run_command(const std::string& command, const fs::path& root) {
  auto lines = split_lines(command);
  bool interpreted = std::any_of(lines.begin(), lines.end(), [](const std::string& l) {
    return l.find_first_not_of(" \t") != std::string::npos &&
           l[l.find_first_not_of(" \t")] == '@';
  });
  if (!interpreted) return run_shell(command, root);

  CommandResult total;
  for (const auto& line : lines) {
    auto first = line.find_first_not_of(" \t");
    CommandResult r = line[first] == '@' ? run_pseudo_command(line.substr(first), root)
                                         : run_shell(line, root);
    total.output += r.output;
    total.exit_code = r.exit_code;
    if (r.exit_code != 0) break;
  }
  return total;
}

}  // namespace forgevar
