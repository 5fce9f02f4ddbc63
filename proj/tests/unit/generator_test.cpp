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

#include "forgevar/generator.hpp"

#include <gtest/gtest.h>

#include "forgevar/error.hpp"
#include "forgevar/toolset.hpp"
#include "test_support.hpp"

namespace forgevar {
namespace {

using testing::ids;
using testing::generator_table_context;
using testing::stub_generator;

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an error";
  return Error(ErrorKind::Usage, "none");
}

PropertySet expanded(const BuildContext& ctx, PropertySet p) {
  return expand_defaults(ctx.features, p);
}

TEST(GeneratorRegistry, DuplicateId) {
  GeneratorRegistry r;
  r.register_generator(stub_generator("gcc.link.dll", "LIB", {{"toolset", "gcc"}}));
  EXPECT_EQ(error_of([&] {
              r.register_generator(stub_generator("gcc.link.dll", "LIB", {{"toolset", "gcc"}}));
            }).kind(),
            ErrorKind::DuplicateGenerator);
}

TEST(Viable, TableSelection) {
  auto ctx = generator_table_context();
  const auto& g = ctx.generators;
  EXPECT_EQ(ids(g.viable("LIB", expanded(ctx, {{"toolset", "gcc"}, {"link", "shared"}}))),
            std::vector<std::string>{"gcc.link.dll"});
  EXPECT_EQ(ids(g.viable("LIB", expanded(ctx, {{"toolset", "msvc"}}))),
            std::vector<std::string>{"msvc.link.dll"});
  EXPECT_TRUE(g.viable("EXE", expanded(ctx, {{"toolset", "msvc"}})).empty());
  EXPECT_TRUE(g.viable("LIB", expanded(ctx, {})).empty());
}

TEST(Dispatch, NoViableGeneratorNamesTypeAndProperties) {
  auto ctx = generator_table_context();
  auto e = error_of([&] {
    ctx.generators.dispatch(ctx, "EXE", "app", expanded(ctx, {{"toolset", "msvc"}}),
                            {{"main.cpp", "CPP"}});
  });
  EXPECT_EQ(e.kind(), ErrorKind::NoViableGenerator);
  EXPECT_NE(e.message().find("EXE"), std::string::npos);
  EXPECT_NE(e.message().find("toolset=msvc"), std::string::npos);
}

TEST(Dispatch, AmbiguityListsEverySucceedingGenerator) {
  auto ctx = generator_table_context();
  ctx.generators.register_generator(stub_generator("gcc.other", "LIB", {{"toolset", "gcc"}}));
  auto e = error_of([&] {
    ctx.generators.dispatch(ctx, "LIB", "helper", expanded(ctx, {{"toolset", "gcc"}}), {});
  });
  EXPECT_EQ(e.kind(), ErrorKind::AmbiguousGenerators);
  EXPECT_NE(e.message().find("gcc.link.dll"), std::string::npos);
  EXPECT_NE(e.message().find("gcc.other"), std::string::npos);
}

TEST(Dispatch, DecliningGeneratorsDoNotCauseAmbiguity) {
  auto ctx = generator_table_context();
  GeneratorSpec declining = stub_generator("gcc.never", "LIB", {{"toolset", "gcc"}});
  declining.construct = [](const GeneratorCall&) { return std::nullopt; };
  ctx.generators.register_generator(declining);
  auto targets =
      ctx.generators.dispatch(ctx, "LIB", "helper", expanded(ctx, {{"toolset", "gcc"}}), {});
  ASSERT_EQ(targets.size(), 1u);
  EXPECT_EQ(targets[0].path, "gcc.link.dll/helper");
}

TEST(Dispatch, AllDeclinedIsNoViableGenerator) {
  BuildContext ctx;
  GeneratorSpec declining = stub_generator("x", "LIB", {});
  declining.construct = [](const GeneratorCall&) { return std::vector<ConcreteTarget>{}; };
  ctx.generators.register_generator(declining);
  EXPECT_EQ(error_of([&] { ctx.generators.dispatch(ctx, "LIB", "a", {}, {}); }).kind(),
            ErrorKind::NoViableGenerator);
}

TEST(Dispatch, RequiredPropertyMismatchIsNeverInvoked) {
  BuildContext ctx;
  int calls = 0;
  GeneratorSpec spy = stub_generator("spy", "LIB", {{"profiling", "on"}});
  auto inner = spy.construct;
  spy.construct = [&calls, inner](const GeneratorCall& c) {
    ++calls;
    return inner(c);
  };
  ctx.generators.register_generator(spy);
  ctx.generators.register_generator(stub_generator("plain", "LIB", {{"profiling", "off"}}));
  ctx.generators.dispatch(ctx, "LIB", "a", expand_defaults(ctx.features, {}), {});
  EXPECT_EQ(calls, 0);
}

TEST(Dispatch, BuiltinLibraryCompilesThenLinks) {
  auto ctx = testing::builtin_context();
  auto props = expanded(ctx, {{"toolset", "gcc"}, {"link", "shared"}, {"target-os", "linux"}});
  auto targets = ctx.generators.dispatch(ctx, "LIB", "helper", props, {{"helper.cpp", "CPP"}});
  ASSERT_EQ(targets.size(), 2u);
  EXPECT_EQ(targets[0].path, "bin/gcc/debug/libhelper.so");
  EXPECT_EQ(targets[0].template_name, "gcc.link.dll");
  EXPECT_EQ(targets[0].dependencies, std::vector<std::string>{"bin/gcc/debug/helper.o"});
  EXPECT_EQ(targets[1].path, "bin/gcc/debug/helper.o");
  EXPECT_EQ(targets[1].template_name, "gcc.compile");
  EXPECT_EQ(targets[1].command, "g++ -c -fPIC -o bin/gcc/debug/helper.o helper.cpp");
  EXPECT_EQ(targets[0].command, "g++ -shared -o bin/gcc/debug/libhelper.so bin/gcc/debug/helper.o");
}

TEST(Dispatch, ReturnedSubgraphIsSelfContained) {
  auto ctx = testing::builtin_context();
  auto props = expanded(ctx, {{"toolset", "mockcc"}, {"link", "static"}});
  auto targets = ctx.generators.dispatch(ctx, "LIB", "core", props,
                                         {{"a.cpp", "CPP"}, {"sub/b.cc", "CPP"}, {"c.o", "OBJ"}});
  std::set<std::string> paths;
  for (const auto& t : targets) paths.insert(t.path);
  for (const auto& t : targets) {
    for (const auto& d : t.dependencies) {
      bool is_input = d == "a.cpp" || d == "sub/b.cc" || d == "c.o";
      EXPECT_TRUE(is_input || paths.count(d)) << d;
    }
  }
  EXPECT_TRUE(paths.count("bin/mockcc/debug/link-static/sub/b.o"));
}

TEST(Dispatch, NestedFailureCarriesGenerationTrace) {
  auto ctx = testing::builtin_context();
  auto props = expanded(ctx, {{"toolset", "gcc"}});
  auto e = error_of(
      [&] { ctx.generators.dispatch(ctx, "EXE", "app", props, {{"notes.txt", ""}}); });
  EXPECT_EQ(e.kind(), ErrorKind::NoViableGenerator);
  EXPECT_NE(e.message().find("while building 'notes.txt' for gcc.link 'app'"), std::string::npos);
}

TEST(Dispatch, IsDeterministic) {
  auto ctx = testing::builtin_context();
  auto props = expanded(ctx, {{"toolset", "msvc"}, {"target-os", "windows"}});
  std::vector<SourceFile> sources = {{"a.cpp", "CPP"}, {"b.cpp", "CPP"}};
  EXPECT_EQ(ctx.generators.dispatch(ctx, "EXE", "app", props, sources),
            ctx.generators.dispatch(ctx, "EXE", "app", props, sources));
}

TEST(Dispatch, UserModuleAddsAssemblerWithoutTouchingCore) {
  auto ctx = testing::builtin_context();
  ctx.toolkit.define_action({"myasm.compile", "as -o $(TARGET) $(SOURCES)", 0});
  ctx.generators.register_generator(
      make_compile_generator("myasm.compile", {{"toolset", "gcc"}}, "ASM"));
  auto props = expanded(ctx, {{"toolset", "gcc"}, {"target-os", "linux"}});

  auto obj = ctx.generators.dispatch(ctx, "OBJ", "start", props, {{"start.s", "ASM"}});
  ASSERT_EQ(obj.size(), 1u);
  EXPECT_EQ(obj[0].template_name, "myasm.compile");
  EXPECT_EQ(obj[0].command, "as -o bin/gcc/debug/start.o start.s");

  // C++ sources still go through gcc.compile alone.
  auto cpp = ctx.generators.dispatch(ctx, "OBJ", "main", props, {{"main.cpp", "CPP"}});
  EXPECT_EQ(cpp[0].template_name, "gcc.compile");
}

TEST(SourceTypeTable, ExtensionsPerTargetOs) {
  auto t = SourceTypeTable::standard();
  EXPECT_EQ(t.type_of("a.cpp", "linux"), "CPP");
  EXPECT_EQ(t.type_of("a.s", "windows"), "ASM");
  EXPECT_EQ(t.type_of("a.o", "linux"), "OBJ");
  EXPECT_EQ(t.type_of("a.obj", "windows"), "OBJ");
  EXPECT_EQ(t.type_of("a.obj", "linux"), std::nullopt);
  EXPECT_EQ(t.type_of("README", "linux"), std::nullopt);
}

}  // namespace
}  // namespace forgevar
