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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "forgevar/driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "--help" || a == "-h") {
      std::cout << "usage: forgevar [options] [feature=value | target | --]...\n"
                   "\n"
                   "Builds the metatargets declared in ./Buildfile once per build request.\n"
                   "Separate build requests with '--'.\n"
                   "\n"
                   "options:\n"
                   "  -jN             run up to N commands at once (default 1)\n"
                   "  --dry-run       print the commands that would run\n"
                   "  --list-targets  list declared metatargets and exit\n";
      return 0;
    }
  }
  return forgevar::run(args, std::filesystem::current_path(), std::cout, std::cerr);
}
