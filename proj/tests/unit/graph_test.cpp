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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "forgevar/error.hpp"
#include "test_support.hpp"

namespace forgevar {
namespace {

using testing::TempWorkspace;

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an error";
  return Error(ErrorKind::Usage, "none");
}

ConcreteTarget concat(const std::string& path, std::vector<std::string> deps,
                      const std::string& extra = "") {
  std::string cmd = "@concat -o " + path + " --";
  for (const auto& d : deps) cmd += " " + d;
  cmd += " --";
  if (!extra.empty()) cmd += " " + extra;
  return {path, "OBJ", std::move(deps), cmd, "test"};
}

ExecuteOptions options_for(const TempWorkspace& ws, int jobs = 1) {
  ExecuteOptions o;
  o.root = ws.root();
  o.jobs = jobs;
  return o;
}

StateStore store_for(const TempWorkspace& ws) {
  return StateStore::load(ws.root() / ".forgevar/state");
}

TEST(TargetGraph, AddIsIdempotent) {
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("a.o", {"a.cpp"}));
  EXPECT_EQ(g.size(), 1u);
}

TEST(TargetGraph, ConflictingDefinitions) {
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  auto e = error_of([&] { g.add_target(concat("a.o", {"a.cpp"}, "-O2")); });
  EXPECT_EQ(e.kind(), ErrorKind::ConflictingTarget);
  EXPECT_NE(e.message().find("a.o"), std::string::npos);
}

TEST(TargetGraph, Cycle) {
  TargetGraph g;
  g.add_target(concat("a", {"b"}));
  g.add_target(concat("b", {"a"}));
  EXPECT_EQ(error_of([&] { g.check_acyclic(); }).kind(), ErrorKind::CyclicGraph);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fingerprint, DependencyOrderDoesNotMatter) {
  EXPECT_EQ(compute_fingerprint("cc", {{"a", "1"}, {"b", "2"}}),
            compute_fingerprint("cc", {{"b", "2"}, {"a", "1"}}));
  EXPECT_NE(compute_fingerprint("cc", {{"a", "1"}}), compute_fingerprint("cc ", {{"a", "1"}}));
  EXPECT_NE(compute_fingerprint("cc", {{"a", "1"}}), compute_fingerprint("cc", {{"a", "2"}}));
}

TEST(StateStore, RoundTripAndFormat) {
  TempWorkspace ws;
  StateStore s(ws.root() / ".forgevar/state");
  s.set("b/x.o", "22");
  s.set("a.o", "11");
  s.save();
  EXPECT_EQ(ws.read(".forgevar/state"), "a.o\t11\nb/x.o\t22\n");
  EXPECT_EQ(store_for(ws), s);
  EXPECT_FALSE(ws.exists(".forgevar/state.tmp"));
}

TEST(StateStore, MissingFileIsEmpty) {
  TempWorkspace ws;
  EXPECT_TRUE(store_for(ws).entries().empty());
}

TEST(StateStore, MalformedFile) {
  TempWorkspace ws;
  ws.write(".forgevar/state", "no tab here\n");
  EXPECT_EQ(error_of([&] { store_for(ws); }).kind(), ErrorKind::StateStoreIO);
}

TEST(OutOfDate, FreshTargetAndChanges) {
  TempWorkspace ws;
  ws.write("a.cpp", "int a;");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  StateStore store;
  const auto& t = *g.find("a.o");
  EXPECT_TRUE(out_of_date(g, store, t, ws.root()));

  ws.write("a.o", "built");
  store.set("a.o", *current_fingerprint(g, t, ws.root()));
  EXPECT_FALSE(out_of_date(g, store, t, ws.root()));

  ws.write("a.cpp", "int a;");
  EXPECT_FALSE(out_of_date(g, store, t, ws.root())) << "identical rewrite";

  ws.write("a.cpp", "int b;");
  EXPECT_TRUE(out_of_date(g, store, t, ws.root()));
}

TEST(OutOfDate, CommandChange) {
  TempWorkspace ws;
  ws.write("a.cpp", "x");
  ws.write("a.o", "y");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  StateStore store;
  store.set("a.o", *current_fingerprint(g, *g.find("a.o"), ws.root()));

  TargetGraph changed;
  changed.add_target(concat("a.o", {"a.cpp"}, "-O2"));
  EXPECT_TRUE(out_of_date(changed, store, *changed.find("a.o"), ws.root()));
}

TEST(OutOfDate, MissingSource) {
  TempWorkspace ws;
  TargetGraph g;
  g.add_target(concat("a.o", {"gone.cpp"}));
  auto e = error_of([&] { out_of_date(g, StateStore{}, *g.find("a.o"), ws.root()); });
  EXPECT_EQ(e.kind(), ErrorKind::MissingSource);
  EXPECT_NE(e.message().find("gone.cpp"), std::string::npos);
}

TEST(PseudoCommand, ConcatWritesHeaderThenSources) {
  TempWorkspace ws;
  ws.write("a", "AA\n");
  ws.write("b", "BB");
  std::string cmd = "@concat -o out/x -- a b -- -shared -pg";
  auto r = run_pseudo_command(cmd, ws.root());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(ws.read("out/x"), "#cmd: " + cmd + "\nAA\nBB");
}

TEST(PseudoCommand, Fail) {
  TempWorkspace ws;
  auto r = run_pseudo_command("@fail boom", ws.root());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("boom"), std::string::npos);
}

TEST(PseudoCommand, ConcatOfFailMarkerFails) {
  TempWorkspace ws;
  ws.write("bad.cpp", "@fail\n");
  EXPECT_EQ(run_pseudo_command("@concat -o x.o -- bad.cpp --", ws.root()).exit_code, 1);
  EXPECT_FALSE(ws.exists("x.o"));
}

TEST(RunCommand, ShellCommandsRunInRoot) {
  TempWorkspace ws;
  auto r = run_command("printf hi > out.txt && echo done", ws.root());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(ws.read("out.txt"), "hi");
  EXPECT_EQ(r.output, "done\n");
  EXPECT_EQ(run_command("exit 3", ws.root()).exit_code, 3);
}

TEST(Execute, BuildsThenEverythingIsUpToDate) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  ws.write("b.cpp", "b");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("b.o", {"b.cpp"}));
  g.add_target(concat("lib.a", {"a.o", "b.o"}));

  auto store = store_for(ws);
  auto first = execute(g, store, options_for(ws));
  EXPECT_EQ(first.built, (std::vector<std::string>{"a.o", "b.o", "lib.a"}));

  auto reloaded = store_for(ws);
  auto second = execute(g, reloaded, options_for(ws));
  EXPECT_TRUE(second.built.empty());
  EXPECT_EQ(second.up_to_date_count, 3u);
  EXPECT_EQ(format_summary(second), "0 built, 3 up to date, 0 failed, 0 skipped\n");
}

TEST(Execute, OnlyTheChangedChainRebuilds) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  ws.write("b.cpp", "b");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("b.o", {"b.cpp"}));
  g.add_target(concat("lib.a", {"a.o", "b.o"}));
  auto store = store_for(ws);
  execute(g, store, options_for(ws));

  ws.write("b.cpp", "b2");
  auto report = execute(g, store, options_for(ws));
  EXPECT_EQ(report.built, (std::vector<std::string>{"b.o", "lib.a"}));
  EXPECT_EQ(report.up_to_date, std::vector<std::string>{"a.o"});
}

TEST(Execute, DeletedOutputIsRebuilt) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  auto store = store_for(ws);
  execute(g, store, options_for(ws));
  std::filesystem::remove(ws.root() / "a.o");
  EXPECT_EQ(execute(g, store, options_for(ws)).built, std::vector<std::string>{"a.o"});
}

TEST(Execute, KeepGoingWithIndependentLibraries) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  ws.write("b.cpp", "@fail\n");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("liba.so", {"a.o"}));
  g.add_target(concat("b.o", {"b.cpp"}));
  g.add_target(concat("libb.so", {"b.o"}));
  auto store = store_for(ws);
  std::ostringstream log;
  auto o = options_for(ws);
  o.log = &log;
  auto report = execute(g, store, o);

  EXPECT_EQ(report.built, (std::vector<std::string>{"a.o", "liba.so"}));
  ASSERT_EQ(report.failed.size(), 1u);
  EXPECT_EQ(report.failed[0].path, "b.o");
  EXPECT_EQ(report.failed[0].exit_code, 1);
  EXPECT_EQ(report.skipped, (std::vector<SkippedTarget>{{"libb.so", "b.o"}}));
  EXPECT_TRUE(ws.exists("liba.so"));
  EXPECT_FALSE(ws.exists("libb.so"));
  EXPECT_NE(log.str().find("FAILED: b.o (exit 1)\nSKIPPED: libb.so (blocked by b.o)\n"
                           "2 built, 0 up to date, 1 failed, 1 skipped\n"),
            std::string::npos);
  EXPECT_FALSE(store.get("b.o").has_value());
}

TEST(Execute, SkipBlamesTheFailedAncestor) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  TargetGraph g;
  g.add_target(concat("A", {"a.cpp"}));
  g.add_target({"B", "OBJ", {"A"}, "@fail", "test"});
  g.add_target(concat("C", {"B"}));
  auto store = store_for(ws);
  auto report = execute(g, store, options_for(ws));
  EXPECT_EQ(report.built, std::vector<std::string>{"A"});
  EXPECT_EQ(report.skipped, (std::vector<SkippedTarget>{{"C", "B"}}));
}

TEST(Execute, FailedTargetIsRetriedNextRun) {
  TempWorkspace ws;
  ws.write("a.cpp", "@fail\n");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  auto store = store_for(ws);
  EXPECT_EQ(execute(g, store, options_for(ws)).failed.size(), 1u);
  ws.write("a.cpp", "fixed");
  EXPECT_EQ(execute(g, store, options_for(ws)).built, std::vector<std::string>{"a.o"});
}

TEST(Execute, DryRunRunsNothingAndPersistsNothing) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("lib.a", {"a.o"}));
  auto store = store_for(ws);
  auto o = options_for(ws);
  o.dry_run = true;
  std::ostringstream log;
  o.log = &log;
  auto report = execute(g, store, o);
  EXPECT_EQ(report.built, (std::vector<std::string>{"a.o", "lib.a"}));
  EXPECT_FALSE(ws.exists("a.o"));
  EXPECT_FALSE(ws.exists(".forgevar/state"));
  EXPECT_NE(log.str().find("@concat -o lib.a -- a.o --"), std::string::npos);
}

TEST(Execute, MissingSourceBeforeAnyCommand) {
  TempWorkspace ws;
  ws.write("a.cpp", "a");
  TargetGraph g;
  g.add_target(concat("a.o", {"a.cpp"}));
  g.add_target(concat("b.o", {"b.cpp"}));
  auto store = store_for(ws);
  EXPECT_EQ(error_of([&] { execute(g, store, options_for(ws)); }).kind(), ErrorKind::MissingSource);
  EXPECT_FALSE(ws.exists("a.o"));
}

TEST(Execute, RespectsTheJobLimit) {
  TempWorkspace ws;
  TargetGraph g;
  for (int i = 0; i < 12; ++i) {
    ws.write("s" + std::to_string(i), "x");
    g.add_target(concat("o" + std::to_string(i), {"s" + std::to_string(i)}));
  }
  std::mutex m;
  int running = 0;
  int peak = 0;
  auto o = options_for(ws, 3);
  o.runner = [&](const std::string& cmd, const std::filesystem::path& root) {
    {
      std::lock_guard lock(m);
      peak = std::max(peak, ++running);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    auto r = run_pseudo_command(cmd, root);
    std::lock_guard lock(m);
    --running;
    return r;
  };
  auto store = store_for(ws);
  EXPECT_EQ(execute(g, store, o).built.size(), 12u);
  EXPECT_LE(peak, 3);
  EXPECT_GE(peak, 2);
}

TEST(Execute, DependenciesFinishBeforeDependents) {
  TempWorkspace ws;
  ws.write("s", "x");
  TargetGraph g;
  g.add_target(concat("n0", {"s"}));
  for (int i = 1; i < 8; ++i) {
    g.add_target(concat("n" + std::to_string(i), {"n" + std::to_string(i - 1), "s"}));
  }
  std::mutex m;
  std::vector<std::string> order;
  auto o = options_for(ws, 4);
  o.runner = [&](const std::string& cmd, const std::filesystem::path& root) {
    auto r = run_pseudo_command(cmd, root);
    std::lock_guard lock(m);
    order.push_back(cmd.substr(std::string("@concat -o ").size(), 2));
    return r;
  };
  auto store = store_for(ws);
  execute(g, store, o);
  EXPECT_EQ(order, (std::vector<std::string>{"n0", "n1", "n2", "n3", "n4", "n5", "n6", "n7"}));
}

}  // namespace
}  // namespace forgevar
