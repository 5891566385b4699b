#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "statictracker/diff.hpp"
#include "statictracker/evaluator.hpp"
#include "statictracker/fix_classifier.hpp"
#include "statictracker/matcher.hpp"
#include "statictracker/refactoring.hpp"
#include "statictracker/snapshot.hpp"
#include "statictracker/warning.hpp"

namespace fixtures {

using namespace statictracker;

// A commit: both source trees, both warning lists (ids are assigned on load)
// and optional refactoring/rename documents.
struct Fixture {
  Detector detector = Detector::spotbugs;
  std::map<std::string, std::string> pre_files;
  std::map<std::string, std::string> post_files;
  std::vector<WarningInstance> pre_warnings;
  std::vector<WarningInstance> post_warnings;
  std::string refactorings_json = "[]";
  RenameMap renames;
};

struct Loaded {
  WarningSet pre;
  WarningSet post;
  RevisionPair pair;
  DiffSet diffs;
  RefactoringSet refs;
};

Loaded load(const Fixture& f);

TrackResult run(const Fixture& f, TrackMode mode, MatcherConfig cfg = {});

// Writes pre/, post/, pre_report.json, post_report.json, refactorings.json
// and (when renames exist) renames.json under `root`.
void write_fixture(const Fixture& f, const std::filesystem::path& root);

std::string join_lines(const std::vector<std::string>& lines);

WarningInstance make_warning(std::string type, std::string cls, std::string method,
                             std::string field, std::string file, int start, int end = 0);

// Id of the only warning in `set` starting at `line`; fails the test if
// there is not exactly one.
StableId id_at(const WarningSet& set, int line);

// Pre line 2 becomes post line 4 after two lines are added on top.
Fixture inserted_header();

// The 'host1' AvoidDuplicateLiterals warning (pre line 94, post line 83)
// inside a renamed method. The RenameMethod record is optional.
Fixture renamed_method(bool with_record);

// Three EqualsNull warnings at pre lines 201/203/205 that move to post lines
// 205/207/209.
Fixture shifted_block();

// SE_BAD_FIELD on opts$4 at line 206 that becomes opts$1 at line 330 in an
// otherwise unchanged Scala statement.
Fixture volatile_field();

// Same trees and warnings on both sides.
Fixture identity(std::mt19937& rng);

// Random files, edits, renames and warnings, some carried across.
Fixture random_pair(std::mt19937& rng);

// Exchanges the two revisions (renames inverted).
Fixture swapped(const Fixture& f);

// `diffs` with pre and post sides exchanged, keyed for the swapped pair.
DiffSet mirror(const DiffSet& diffs);

std::filesystem::path temp_dir(const std::string& name);

// p/Svc.java: class Svc at line 3, field count at 4, work() at 5-10 with
// use(a)/use(b) at 8/9, other() at 11-13. p/Keep.java stays unchanged.
extern const std::vector<std::string> kService;

// kService with lines replaced, dropped, or preceded by inserted lines.
std::vector<std::string> edited(std::vector<std::pair<int, std::string>> replace,
                                std::vector<int> drop = {},
                                std::vector<std::pair<int, std::string>> insert_before = {});

// Classifies `removed` against kService turned into `post` (nullopt deletes
// the file).
std::vector<FixDecision> classify_service(const std::optional<std::vector<std::string>>& post,
                                          std::vector<WarningInstance> removed);

struct Labelled {
  TrackResult result;
  GroundTruth truth;
};

// A result predicting `predicted` warnings per non-persistent status
// (removed_fix, removed_non_fix, newly_introduced) of which `correct` carry
// that status in the labels.
struct StatusTally {
  std::size_t correct = 0;
  std::size_t predicted = 0;
};
Labelled labelled_result(StatusTally fix, StatusTally non_fix, StatusTally newly);

}  // namespace fixtures
