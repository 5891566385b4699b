#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "statictracker/decl_index.hpp"

using namespace statictracker;

namespace {

const Decl* named(const std::vector<Decl>& decls, const std::string& name) {
  for (const auto& d : decls) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

void check_invariants(const DeclIndex& idx) {
  auto in_file = [&](const Decl& d) {
    EXPECT_FALSE(d.name.empty());
    EXPECT_LE(1, d.start_line);
    EXPECT_LE(d.start_line, d.declaration_line);
    EXPECT_LE(d.declaration_line, d.end_line);
    EXPECT_LE(d.end_line, idx.line_count);
  };
  for (const auto& c : idx.classes) in_file(c);
  for (const auto* list : {&idx.methods, &idx.fields}) {
    for (const auto& d : *list) {
      in_file(d);
      ASSERT_TRUE(d.enclosing.has_value()) << d.name;
      ASSERT_LT(*d.enclosing, idx.classes.size());
      EXPECT_TRUE(idx.classes[*d.enclosing].range().contains(d.range())) << d.name;
    }
  }
}

}  // namespace

TEST(BuildDeclIndex, MinimalClass) {
  const DeclIndex idx = build_decl_index("class A {\n  void m() { }\n}\n", "A.java");
  ASSERT_EQ(idx.classes.size(), 1u);
  EXPECT_EQ(idx.classes[0].name, "A");
  EXPECT_EQ(idx.classes[0].range(), (LineRange{1, 3}));
  ASSERT_EQ(idx.methods.size(), 1u);
  EXPECT_EQ(idx.methods[0].name, "m");
  EXPECT_EQ(idx.methods[0].range(), (LineRange{2, 2}));
  check_invariants(idx);
}

TEST(BuildDeclIndex, SingleField) {
  const DeclIndex idx = build_decl_index("class A {\n  private int x = 0;\n}\n", "A.java");
  ASSERT_EQ(idx.fields.size(), 1u);
  const Decl& x = idx.fields[0];
  EXPECT_EQ(x.name, "x");
  EXPECT_EQ(x.start_line, 2);
  EXPECT_EQ(x.end_line, 2);
  EXPECT_EQ(x.declaration_line, 2);
}

TEST(BuildDeclIndex, MethodContainingDuplicatedLiteral) {
  const auto f = fixtures::renamed_method(false);
  const auto& [path, text] = *f.pre_files.begin();
  const DeclIndex idx = build_decl_index(text, path);
  const Decl* m = named(idx.methods, "testHostResolution");
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->range().contains(94));
  EXPECT_EQ(m->declaration_line, 90);
  check_invariants(idx);
}

TEST(BuildDeclIndex, MultiLineSignatureAndAnnotations) {
  const char* text =
      "public class A {\n"            // 1
      "  @Override\n"                 // 2
      "  public String toString(\n"   // 3
      "      int a,\n"                // 4
      "      int b) {\n"              // 5
      "    return \"}\";\n"           // 6
      "  }\n"                         // 7
      "  int p, q = 2;\n"             // 8
      "}\n";                          // 9
  const DeclIndex idx = build_decl_index(text, "A.java");
  const Decl* m = named(idx.methods, "toString");
  ASSERT_NE(m, nullptr);
  EXPECT_EQ(m->declaration_line, 3);
  EXPECT_EQ(m->end_line, 7);
  EXPECT_NE(named(idx.fields, "p"), nullptr);
  EXPECT_NE(named(idx.fields, "q"), nullptr);
  check_invariants(idx);
}

TEST(BuildDeclIndex, CommentsAndStringsDoNotConfuseBraces) {
  const char* text =
      "class A {\n"
      "  // }\n"
      "  /* { */\n"
      "  char c = '{';\n"
      "  String s = \"{{\";\n"
      "  void m() {\n"
      "  }\n"
      "}\n";
  const DeclIndex idx = build_decl_index(text, "A.java");
  ASSERT_EQ(idx.classes.size(), 1u);
  EXPECT_EQ(idx.classes[0].range(), (LineRange{1, 8}));
  EXPECT_NE(named(idx.methods, "m"), nullptr);
  EXPECT_NE(named(idx.fields, "c"), nullptr);
  EXPECT_NE(named(idx.fields, "s"), nullptr);
}

TEST(BuildDeclIndex, NestedClassesAndAnonymousBodies) {
  const char* text =
      "class Outer {\n"                          // 1
      "  static class Inner {\n"                 // 2
      "    void run() {\n"                       // 3
      "      Runnable r = new Runnable() {\n"    // 4
      "        public void run() { }\n"          // 5
      "      };\n"                               // 6
      "    }\n"                                  // 7
      "  }\n"                                    // 8
      "}\n";                                     // 9
  const DeclIndex idx = build_decl_index(text, "Outer.java");
  const Decl* inner = named(idx.classes, "Inner");
  ASSERT_NE(inner, nullptr);
  EXPECT_EQ(inner->range(), (LineRange{2, 8}));
  ASSERT_TRUE(inner->enclosing.has_value());
  EXPECT_EQ(idx.classes[*inner->enclosing].name, "Outer");
  const Decl* run = named(idx.methods, "run");
  ASSERT_NE(run, nullptr);
  EXPECT_EQ(run->range(), (LineRange{3, 7}));
  check_invariants(idx);
}

TEST(BuildDeclIndex, UnbalancedRegionIsOmitted) {
  const DeclIndex idx = build_decl_index("class A {\n  void m() {\n", "A.java");
  EXPECT_TRUE(idx.classes.empty());
  EXPECT_TRUE(idx.methods.empty());
}

TEST(BuildDeclIndex, ScalaObjectDefAndVal) {
  const auto f = fixtures::volatile_field();
  const auto& [path, text] = *f.pre_files.begin();
  const DeclIndex idx = build_decl_index(text, path);
  const Decl* obj = named(idx.classes, "AclCommand");
  ASSERT_NE(obj, nullptr);
  const Decl* list = named(idx.methods, "listAcls");
  ASSERT_NE(list, nullptr);
  EXPECT_EQ(list->range(), (LineRange{201, 208}));
  EXPECT_NE(named(idx.fields, "setting3"), nullptr);
  check_invariants(idx);
}

TEST(BuildDeclIndex, NeverFailsOnGarbage) {
  std::mt19937 rng(17);
  const std::string alphabet = "{}();=\"'/*\n abcint class void";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int round = 0; round < 500; ++round) {
    std::string text;
    for (int i = 0; i < 200; ++i) text += alphabet[pick(rng)];
    const DeclIndex idx = build_decl_index(text, round % 2 ? "G.scala" : "G.java");
    check_invariants(idx);
  }
}

TEST(LocateContext, MethodByContainmentWhenUnnamed) {
  const DeclIndex idx = build_decl_index("class A {\n  void m() {\n    x();\n  }\n}\n", "A.java");
  WarningInstance w = fixtures::make_warning("T", "A", "", "", "A.java", 3);
  const WarningContext ctx = locate_context(w, idx);
  ASSERT_TRUE(ctx.cls);
  EXPECT_EQ(ctx.cls->name, "A");
  ASSERT_TRUE(ctx.mth);
  EXPECT_EQ(ctx.mth->name, "m");
  EXPECT_FALSE(ctx.field);
}

TEST(LocateContext, UnknownClassFallsBackToContainment) {
  const DeclIndex idx = build_decl_index("class A {\n  int f;\n}\n", "A.java");
  auto ctx = locate_context(fixtures::make_warning("T", "Nope", "", "", "A.java", 2), idx);
  ASSERT_TRUE(ctx.cls);
  EXPECT_EQ(ctx.cls->name, "A");
  ctx = locate_context(fixtures::make_warning("T", "Nope", "", "", "A.java", 3, 3), DeclIndex{});
  EXPECT_FALSE(ctx.cls);
}

TEST(LocateContext, ClassLevelWarningHasNoMethodOrField) {
  std::vector<std::string> lines{"package org.jclouds;", "public class ContextBuilderTest {"};
  while (lines.size() < 69) lines.push_back("  private int f" + std::to_string(lines.size()) + ";");
  for (int i = 0; i < 6; ++i) lines.push_back("  // line " + std::to_string(70 + i));
  lines.push_back("}");
  const DeclIndex idx = build_decl_index(fixtures::join_lines(lines), "org/jclouds/ContextBuilder.java");
  const auto w = fixtures::make_warning("SE_BAD_FIELD", "ContextBuilderTest", "", "",
                                        "org/jclouds/ContextBuilder.java", 70, 75);
  const WarningContext ctx = locate_context(w, idx);
  ASSERT_TRUE(ctx.cls);
  EXPECT_EQ(ctx.cls->name, "ContextBuilderTest");
  EXPECT_FALSE(ctx.mth);
  EXPECT_FALSE(ctx.field);
}

TEST(LocateContext, QualifiedNamesAndFields) {
  const char* text =
      "package p;\n"
      "class Outer {\n"
      "  class Inner {\n"
      "    String cache = null;\n"
      "  }\n"
      "}\n";
  const DeclIndex idx = build_decl_index(text, "p/Outer.java");
  const auto w = fixtures::make_warning("T", "p.Outer$Inner", "", "cache", "p/Outer.java", 4);
  const WarningContext ctx = locate_context(w, idx);
  ASSERT_TRUE(ctx.cls);
  EXPECT_EQ(ctx.cls->name, "Inner");
  ASSERT_TRUE(ctx.field);
  EXPECT_EQ(ctx.field->name, "cache");
}

TEST(LocateContext, OverloadsResolvedByContainment) {
  const char* text =
      "class A {\n"
      "  void m(int a) {\n"
      "    a++;\n"
      "  }\n"
      "  void m(String s) {\n"
      "    s.trim();\n"
      "  }\n"
      "}\n";
  const DeclIndex idx = build_decl_index(text, "A.java");
  const auto ctx = locate_context(fixtures::make_warning("T", "A", "m", "", "A.java", 6), idx);
  ASSERT_TRUE(ctx.mth);
  EXPECT_EQ(ctx.mth->range(), (LineRange{5, 7}));
}

TEST(DeclIndexJson, HasAllLists) {
  const auto doc = to_json(build_decl_index("class A {\n  int x;\n}\n", "A.java"));
  EXPECT_EQ(doc["file_path"], "A.java");
  EXPECT_EQ(doc["classes"].size(), 1u);
  EXPECT_EQ(doc["fields"].size(), 1u);
  EXPECT_TRUE(doc["methods"].empty());
}
