#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "statictracker/assignment.hpp"
#include "statictracker/diff.hpp"
#include "statictracker/fix_classifier.hpp"
#include "statictracker/refactoring.hpp"
#include "statictracker/snapshot.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

enum class TrackMode { sota, statictracker };

std::string_view to_string(TrackMode m);
std::optional<TrackMode> mode_from_string(std::string_view s);

struct MatcherConfig {
  int location_threshold = 3;
  int hash_top_n = 5;
  TrackMode mode = TrackMode::statictracker;
  bool snippet_trim_trailing_ws = true;
  unsigned jobs = 1;
};

// Throws ConfigError when a field is out of range.
void validate(const MatcherConfig& cfg);

// Thread-safe sink for non-fatal findings (rejected out-of-range snippets,
// fall-through classifications).
class Diagnostics {
 public:
  void add(std::string message);
  std::vector<std::string> sorted() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> messages_;
};

bool exact_match(const WarningInstance& a, const WarningInstance& b);

// Compares names and type of `a` and `b`; `a`'s line is read on the pre side
// of `diff` and `b`'s on the post side.
bool location_match(const WarningInstance& a, const WarningInstance& b, const DiffResult& diff,
                    const MatcherConfig& cfg, Diagnostics* diags = nullptr);

// Lines [start, end] of `a` in `pre` (at a.file_path) and of `b` in `post`
// (at b.file_path) must be identical and the names equal.
bool snippet_match(const WarningInstance& a, const WarningInstance& b, const Snapshot& pre,
                   const Snapshot& post, const MatcherConfig& cfg, Diagnostics* diags = nullptr);

// Identifier/number runs and single punctuation characters; whitespace
// separates.
std::vector<std::string> tokenize(std::string_view text);

// FNV-1a over the tokens joined by '\x1f'.
std::uint64_t hash_tokens(const std::vector<std::string>& tokens, std::size_t from,
                          std::size_t to);

bool hash_match(const WarningInstance& a, const WarningInstance& b, const Snapshot& pre,
                const Snapshot& post, const MatcherConfig& cfg, Diagnostics* diags = nullptr);

struct MatchedPair {
  StableId pre_id;
  StableId post_id;
  std::string strategy;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct TrackResult {
  TrackMode mode = TrackMode::statictracker;
  std::vector<MatchedPair> pairs;  // sorted by pre id
  std::vector<StableId> removed_fix;
  std::vector<StableId> removed_non_fix;
  std::vector<StableId> newly_introduced;
  std::vector<StableId> persistent_pre;
  std::vector<StableId> persistent_post;
  std::vector<FixDecision> fix_decisions;
  std::vector<std::string> diagnostics;
};

nlohmann::json to_json(const TrackResult& r);
// Reads the document written by to_json; the fix trace and diagnostics are
// optional.
TrackResult track_result_from_json(const nlohmann::json& doc);

TrackResult track_sota(const WarningSet& pre, const WarningSet& post, const RevisionPair& pair,
                       const DiffSet& diffs, const MatcherConfig& cfg);

// Expects both sets already normalised and `pre_rewritten` already passed
// through rewrite_metadata; row/column order follows the given spans.
CandidateMatrix build_candidate_matrix(std::span<const WarningInstance> pre_original,
                                       std::span<const WarningInstance> pre_rewritten,
                                       std::span<const WarningInstance> post,
                                       const RevisionPair& pair, const DiffSet& diffs,
                                       const MatcherConfig& cfg, Diagnostics* diags = nullptr);

TrackResult track_statictracker(const WarningSet& pre, const WarningSet& post,
                                const RevisionPair& pair, const DiffSet& diffs,
                                const RefactoringSet& refs, const MatcherConfig& cfg);

// Dispatches on cfg.mode; refactorings are ignored in SOTA mode.
TrackResult track(const WarningSet& pre, const WarningSet& post, const RevisionPair& pair,
                  const DiffSet& diffs, const RefactoringSet& refs, const MatcherConfig& cfg);

}  // namespace statictracker
