#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>

#include <unistd.h>

#include "statictracker/pipeline.hpp"

namespace fixtures {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

WarningInstance make_warning(std::string type, std::string cls, std::string method,
                             std::string field, std::string file, int start, int end) {
  WarningInstance w;
  w.warning_type = std::move(type);
  w.class_name = std::move(cls);
  w.method_name = std::move(method);
  w.field_name = std::move(field);
  w.file_path = std::move(file);
  w.start_line = start;
  w.end_line = end == 0 ? start : end;
  return w;
}

Loaded load(const Fixture& f) {
  Snapshot pre("pre");
  Snapshot post("post");
  for (const auto& [path, text] : f.pre_files) pre.add_file(path, text);
  for (const auto& [path, text] : f.post_files) post.add_file(path, text);
  auto with_detector = [&](std::vector<WarningInstance> ws) {
    for (auto& w : ws) {
      w.detector = f.detector;
      w.stable_id = {};
    }
    return ws;
  };
  auto pair = compute_revision_pair(std::move(pre), std::move(post), f.renames);
  auto diffs = compute_diffs(pair, 2);
  return Loaded{WarningSet::with_fresh_ids("pre", with_detector(f.pre_warnings)),
                WarningSet::with_fresh_ids("post", with_detector(f.post_warnings)),
                std::move(pair), std::move(diffs), parse_refactorings(f.refactorings_json)};
}

TrackResult run(const Fixture& f, TrackMode mode, MatcherConfig cfg) {
  const Loaded l = load(f);
  cfg.mode = mode;
  return track(l.pre, l.post, l.pair, l.diffs, l.refs, cfg);
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

std::string report_json(const std::vector<WarningInstance>& ws, Detector d) {
  auto arr = nlohmann::json::array();
  for (const auto& w : ws) {
    arr.push_back({{"detector", std::string(to_string(d))},
                   {"warning_type", w.warning_type},
                   {"project", w.project},
                   {"class", w.class_name},
                   {"method", w.method_name},
                   {"field", w.field_name},
                   {"file_path", w.file_path},
                   {"start_line", w.start_line},
                   {"end_line", w.end_line}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace

void write_fixture(const Fixture& f, const std::filesystem::path& root) {
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root / "pre");
  std::filesystem::create_directories(root / "post");
  for (const auto& [path, text] : f.pre_files) write_file(root / "pre" / path, text);
  for (const auto& [path, text] : f.post_files) write_file(root / "post" / path, text);
  write_file(root / "pre_report.json", report_json(f.pre_warnings, f.detector));
  write_file(root / "post_report.json", report_json(f.post_warnings, f.detector));
  write_file(root / "refactorings.json", f.refactorings_json);
  if (!f.renames.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& [from, to] : f.renames) arr.push_back({{"pre_path", from}, {"post_path", to}});
    write_file(root / "renames.json", arr.dump(2));
  }
}

StableId id_at(const WarningSet& set, int line) {
  std::vector<StableId> found;
  for (const auto& w : set) {
    if (w.start_line == line) found.push_back(w.stable_id);
  }
  EXPECT_EQ(found.size(), 1u) << "warnings starting at line " << line;
  return found.empty() ? StableId{} : found.front();
}

Fixture inserted_header() {
  const std::vector<std::string> pre{
      "public class Holder {",
      "  private Object cache = null;",
      "  void reset() {",
      "    cache = null;",
      "  }",
      "}",
  };
  std::vector<std::string> post{"package demo;", "import java.util.List;"};
  post.insert(post.end(), pre.begin(), pre.end());
  Fixture f;
  f.detector = Detector::pmd;
  f.pre_files["demo/Holder.java"] = join_lines(pre);
  f.post_files["demo/Holder.java"] = join_lines(post);
  f.pre_warnings = {make_warning("NullAssignment", "demo.Holder", "", "", "demo/Holder.java", 2)};
  f.post_warnings = {make_warning("NullAssignment", "demo.Holder", "", "", "demo/Holder.java", 4)};
  return f;
}

namespace {

// Distinct filler statements so the diff has no accidental anchors.
void filler(std::vector<std::string>& lines, int count, const std::string& tag) {
  for (int i = 0; i < count; ++i) {
    lines.push_back("    int " + tag + "_" + std::to_string(lines.size()) + " = " +
                    std::to_string(i) + ";");
  }
}

}  // namespace

Fixture renamed_method(bool with_record) {
  // Pre: an 11-line helper (lines 40-50) that post drops, and the test method
  // whose signature line (90) is renamed.
  std::vector<std::string> pre{"package org.jclouds.rest;", "", "public class HostResolutionTest {"};
  while (pre.size() < 39) pre.push_back("  private static final int CONST_" + std::to_string(pre.size()) + " = 1;");
  pre.push_back("  private void legacyHelper() {");  // 40
  filler(pre, 9, "legacy");                            // 41-49
  pre.push_back("  }");                                // 50
  while (pre.size() < 89) pre.push_back("  private static final int LATE_" + std::to_string(pre.size()) + " = 2;");
  pre.push_back("  public void testHostResolution() {");  // 90
  pre.push_back("    Resolver r = new Resolver();");      // 91
  pre.push_back("    r.add(\"host0\");");                 // 92
  pre.push_back("    r.check();");                        // 93
  pre.push_back("    r.add(\"host1\");");                 // 94
  pre.push_back("    r.remove(\"host1\");");              // 95
  pre.push_back("    r.verify(\"host1\");");              // 96
  pre.push_back("  }");                                   // 97
  pre.push_back("}");                                     // 98

  std::vector<std::string> post;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    if (line >= 40 && line <= 50) continue;
    post.push_back(line == 90 ? "  public void testResolveHosts() {" : pre[i]);
  }

  Fixture f;
  f.detector = Detector::pmd;
  const std::string file = "org/jclouds/rest/HostResolutionTest.java";
  const std::string cls = "org.jclouds.rest.HostResolutionTest";
  f.pre_files[file] = join_lines(pre);
  f.post_files[file] = join_lines(post);
  f.pre_warnings = {make_warning("AvoidDuplicateLiterals", cls, "testHostResolution", "", file, 94)};
  f.post_warnings = {make_warning("AvoidDuplicateLiterals", cls, "testResolveHosts", "", file, 83)};
  if (with_record) {
    f.refactorings_json = R"([{"kind": "RenameMethod",
      "before": {"file_path": ")" + file + R"(", "class_name": ")" + cls +
                          R"(", "method_name": "testHostResolution"},
      "after": {"file_path": ")" + file + R"(", "class_name": ")" + cls +
                          R"(", "method_name": "testResolveHosts"}}])";
  }
  return f;
}

Fixture shifted_block() {
  std::vector<std::string> pre{"package org.example;", "", "public class ConfigParser {"};
  while (pre.size() < 189) {
    pre.push_back("  private int setting" + std::to_string(pre.size()) + " = " +
                  std::to_string(pre.size()) + ";");
  }
  pre.push_back("  public boolean check(String name, String host, String port) {");  // 190
  filler(pre, 9, "local");                                                          // 191-199
  pre.push_back("    log(\"checking\");");                                          // 200
  pre.push_back("    if (name.equals(null)) return false;");                        // 201
  pre.push_back("    count++;");                                                    // 202
  pre.push_back("    if (host.equals(null)) return false;");                        // 203
  pre.push_back("    count++;");                                                    // 204
  pre.push_back("    if (port.equals(null)) return false;");                        // 205
  pre.push_back("    return true;");                                                // 206
  pre.push_back("  }");                                                             // 207
  pre.push_back("}");                                                               // 208

  std::vector<std::string> post;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    if (line == 3) {
      post.push_back("import java.util.Objects;");
      post.push_back("import java.util.logging.Logger;");
      post.push_back("");
      post.push_back("@SuppressWarnings(\"unused\")");
    }
    post.push_back(line == 200 ? "    log(\"validating\");" : pre[i]);
  }

  Fixture f;
  f.detector = Detector::pmd;
  const std::string file = "org/example/ConfigParser.java";
  for (int line : {201, 203, 205}) {
    f.pre_warnings.push_back(make_warning("EqualsNull", "org.example.ConfigParser", "check", "", file, line));
    f.post_warnings.push_back(
        make_warning("EqualsNull", "org.example.ConfigParser", "check", "", file, line + 4));
  }
  f.pre_files[file] = join_lines(pre);
  f.post_files[file] = join_lines(post);
  return f;
}

Fixture volatile_field() {
  std::vector<std::string> pre{"package kafka.admin", "", "object AclCommand {"};
  while (pre.size() < 200) pre.push_back("  val setting" + std::to_string(pre.size()) + " = " + std::to_string(pre.size()));
  pre.push_back("  def listAcls(opts: AclCommandOptions): Unit = {");              // 201
  pre.push_back("    val filters = getResourceFilter(opts)");                      // 202
  pre.push_back("    val groups = filters.groupBy(_.patternType)");                // 203
  pre.push_back("    println(s\"Listing ${groups.size} groups\")");                // 204
  pre.push_back("    val resourceToAcls =");                                       // 205
  pre.push_back("      groups.map(_ -> getAcl(opts, Set(Read))).toMap[ResourcePatternFilter, Set[Acl]]");  // 206
  pre.push_back("    resourceToAcls.foreach(println)");                            // 207
  pre.push_back("  }");                                                            // 208
  pre.push_back("}");                                                              // 209

  // 119 lines added on top and line 203 split into six, so the warning line
  // lands on 330 while its distance from the nearest hunk changes by 5.
  std::vector<std::string> post;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (i == 3) {
      for (int k = 0; k < 119; ++k) post.push_back("  val added" + std::to_string(k) + " = \"" + std::to_string(k * 7) + "\"");
    }
    if (i + 1 == 203) {
      for (const char* l : {"    val groups = filters", "      .filter(_.nonEmpty)",
                            "      .groupBy(_.patternType)", "      .view",
                            "      .mapValues(identity)", "      .toMap"}) {
        post.push_back(l);
      }
      continue;
    }
    post.push_back(pre[i]);
  }

  Fixture f;
  f.detector = Detector::spotbugs;
  const std::string file = "kafka/admin/AclCommand.scala";
  auto w = [&](const std::string& field, int line) {
    auto x = make_warning("SE_BAD_FIELD", "AclCommand", "", field, file, line);
    x.project = "kafka";
    return x;
  };
  f.pre_files[file] = join_lines(pre);
  f.post_files[file] = join_lines(post);
  f.pre_warnings = {w("opts$4", 206)};
  f.post_warnings = {w("opts$1", 330)};
  return f;
}

namespace {

const std::vector<std::string> kTypes{"NP_NULL", "EqualsNull", "UNUSED_FIELD"};
const std::vector<std::string> kMethods{"", "run", "apply"};

std::vector<std::string> random_file(std::mt19937& rng, int lines) {
  std::uniform_int_distribution<int> stmt(0, 11);
  std::vector<std::string> out;
  for (int i = 0; i < lines; ++i) out.push_back("  call" + std::to_string(stmt(rng)) + "();");
  return out;
}

}  // namespace

Fixture identity(std::mt19937& rng) {
  Fixture f = random_pair(rng);
  f.post_files = f.pre_files;
  f.post_warnings = f.pre_warnings;
  f.renames.clear();
  return f;
}

Fixture random_pair(std::mt19937& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  Fixture f;
  const int files = uni(1, 3);
  for (int k = 0; k < files; ++k) {
    const std::string path = "pkg/File" + std::to_string(k) + ".java";
    const std::string cls = "pkg.File" + std::to_string(k);
    auto pre = random_file(rng, uni(8, 40));

    // Post text plus, for every pre line, its post line if it survived.
    std::vector<std::string> post;
    std::vector<int> moved(pre.size() + 1, 0);
    const bool changed = chance(0.7);
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (changed && chance(0.1)) {
        for (int n = uni(1, 4); n > 0; --n) post.push_back("  inserted" + std::to_string(uni(0, 5)) + "();");
      }
      if (changed && chance(0.08)) continue;  // deleted
      if (changed && chance(0.05)) {
        post.push_back("  edited" + std::to_string(uni(0, 3)) + "();");
        continue;
      }
      post.push_back(pre[i]);
      moved[i + 1] = static_cast<int>(post.size());
    }
    const bool deleted = chance(0.05);
    std::string post_path = path;
    if (!deleted && chance(0.15)) {
      post_path = "moved/File" + std::to_string(k) + ".java";
      f.renames[path] = post_path;
    }
    f.pre_files[path] = join_lines(pre);
    if (!deleted) f.post_files[post_path] = join_lines(post);

    const int pre_lines = static_cast<int>(pre.size());
    for (int n = uni(0, 6); n > 0; --n) {
      const int line = uni(1, pre_lines);
      const int len = std::min(uni(0, 2), pre_lines - line);
      auto w = make_warning(kTypes[uni(0, 2)], cls, kMethods[uni(0, 2)], "", path, line, line + len);
      f.pre_warnings.push_back(w);
      if (!deleted && moved[line] > 0 && moved[line + len] > 0 && chance(0.75)) {
        w.file_path = post_path;
        w.start_line = moved[line];
        w.end_line = moved[line + len];
        if (w.end_line >= w.start_line) f.post_warnings.push_back(w);
      }
    }
    if (!deleted) {
      const int post_lines = static_cast<int>(post.size());
      for (int n = uni(0, 3); n > 0 && post_lines > 0; --n) {
        const int line = uni(1, post_lines);
        f.post_warnings.push_back(make_warning(kTypes[uni(0, 2)], cls, kMethods[uni(0, 2)], "",
                                               post_path, line));
      }
    }
  }
  return f;
}

Fixture swapped(const Fixture& f) {
  Fixture s;
  s.detector = f.detector;
  s.pre_files = f.post_files;
  s.post_files = f.pre_files;
  s.pre_warnings = f.post_warnings;
  s.post_warnings = f.pre_warnings;
  for (const auto& [from, to] : f.renames) s.renames[to] = from;
  return s;
}

DiffSet mirror(const DiffSet& diffs) {
  std::map<std::string, DiffResult> out;
  for (const auto& [key, d] : diffs.all()) {
    DiffResult m;
    m.file_path = d.post_file_path;
    m.post_file_path = d.file_path;
    m.pre_line_count = d.post_line_count;
    m.post_line_count = d.pre_line_count;
    for (const auto& h : d.hunks) {
      Hunk x{h.post_start, h.post_len, h.pre_start, h.pre_len, h.kind};
      if (h.kind == HunkKind::insert) x.kind = HunkKind::remove;
      if (h.kind == HunkKind::remove) x.kind = HunkKind::insert;
      m.hunks.push_back(x);
    }
    for (const auto& [a, b] : d.line_map) m.line_map.emplace_back(b, a);
    out.emplace(m.file_path, std::move(m));
  }
  return DiffSet(std::move(out));
}

std::filesystem::path temp_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  auto p = std::filesystem::temp_directory_path() /
           ("statictracker-" + name + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

const std::vector<std::string> kService{
    "package p;",                   // 1
    "",                             // 2
    "public class Svc {",           // 3
    "  private int count = 0;",     // 4
    "  public void work() {",       // 5
    "    int a = 1;",               // 6
    "    int b = 2;",               // 7
    "    use(a);",                  // 8
    "    use(b);",                  // 9
    "  }",                          // 10
    "  public void other() {",      // 11
    "    other2();",                // 12
    "  }",                          // 13
    "}",                            // 14
};

std::vector<std::string> edited(std::vector<std::pair<int, std::string>> replace, std::vector<int> drop,
                                std::vector<std::pair<int, std::string>> insert_before) {
  std::vector<std::string> out;
  for (int line = 1; line <= static_cast<int>(kService.size()); ++line) {
    for (const auto& [at, text] : insert_before) {
      if (at == line) out.push_back(text);
    }
    if (std::find(drop.begin(), drop.end(), line) != drop.end()) continue;
    std::string text = kService[static_cast<std::size_t>(line - 1)];
    for (const auto& [at, t] : replace) {
      if (at == line) text = t;
    }
    out.push_back(text);
  }
  return out;
}

std::vector<FixDecision> classify_service(const std::optional<std::vector<std::string>>& post,
                                          std::vector<WarningInstance> removed) {
  Fixture f;
  f.pre_files["p/Svc.java"] = join_lines(kService);
  f.pre_files["p/Keep.java"] = "class Keep {}\n";
  f.post_files["p/Keep.java"] = "class Keep {}\n";
  if (post) f.post_files["p/Svc.java"] = join_lines(*post);
  f.pre_warnings = std::move(removed);
  const auto l = load(f);
  const auto pre_idx = build_decl_indices(l.pair.pre(), l.pair.pre().paths());
  const auto post_idx = build_decl_indices(l.pair.post(), l.pair.post().paths());
  const std::vector<WarningInstance> all(l.pre.begin(), l.pre.end());
  return classify_removed(all, l.pair, l.diffs, pre_idx, post_idx).trace;
}

Labelled labelled_result(StatusTally fix, StatusTally non_fix, StatusTally newly) {
  Labelled out;
  std::uint32_t pre = 0, post = 0;
  auto fill = [&](StatusTally t, std::vector<StableId>& list, EvolutionStatus right,
                  EvolutionStatus wrong, bool post_side) {
    for (std::size_t k = 0; k < t.predicted; ++k) {
      const StableId id = post_side ? StableId("post", ++post) : StableId("pre", ++pre);
      list.push_back(id);
      out.truth.labels[id] = k < t.correct ? right : wrong;
    }
  };
  fill(fix, out.result.removed_fix, EvolutionStatus::removed_fix, EvolutionStatus::removed_non_fix, false);
  fill(non_fix, out.result.removed_non_fix, EvolutionStatus::removed_non_fix,
       EvolutionStatus::persistent, false);
  fill(newly, out.result.newly_introduced, EvolutionStatus::newly_introduced,
       EvolutionStatus::persistent, true);
  return out;
}

}  // namespace fixtures
