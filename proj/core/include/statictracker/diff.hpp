#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace statictracker {

class RevisionPair;

enum class HunkKind { insert, remove, replace };

std::string_view to_string(HunkKind k);

// A maximal run of edited lines. Ranges are 1-based. For an insertion
// pre_start is the pre line the new lines precede (pre line count + 1 when
// appending); symmetrically for a deletion's post_start.
struct Hunk {
  int pre_start = 1;
  int pre_len = 0;
  int post_start = 1;
  int post_len = 0;
  HunkKind kind = HunkKind::replace;

  int pre_end() const noexcept { return pre_start + pre_len - 1; }
  int post_end() const noexcept { return post_start + post_len - 1; }

  friend bool operator==(const Hunk&, const Hunk&) = default;
};

struct LineRange {
  int start = 1;
  int end = 1;

  bool contains(int line) const noexcept { return start <= line && line <= end; }
  bool contains(const LineRange& r) const noexcept { return start <= r.start && r.end <= end; }
  friend bool operator==(const LineRange&, const LineRange&) = default;
  friend auto operator<=>(const LineRange&, const LineRange&) = default;
};

enum class Side { pre, post };

struct DiffResult {
  std::string file_path;       // pre-side path
  std::string post_file_path;  // differs from file_path across a rename
  int pre_line_count = 0;
  int post_line_count = 0;
  std::vector<Hunk> hunks;
  // Unchanged lines, (pre, post), strictly increasing in both coordinates.
  std::vector<std::pair<int, int>> line_map;

  std::optional<int> map_pre_to_post(int pre_line) const;
};

// Minimal line diff (Myers, linear-space refinement). Lines are compared
// byte-exactly.
DiffResult compute_diff(std::string_view pre_text, std::string_view post_text,
                        const std::string& file_path, const std::string& post_file_path = {});

// Same, over pre-split lines.
DiffResult compute_diff(const std::vector<std::string>& pre_lines,
                        const std::vector<std::string>& post_lines, const std::string& file_path,
                        const std::string& post_file_path = {});

struct AnchorOffset {
  int anchor_line = 1;
  int offset = 0;
  friend bool operator==(const AnchorOffset&, const AnchorOffset&) = default;
};

// Distance of `line` from the start of the last hunk that starts at or before
// it on the given side; line 1 anchors lines that precede every hunk.
// Throws PreconditionError when `line` is outside 1..line count.
AnchorOffset anchor_offset(const DiffResult& diff, int line, Side side);

enum class RegionChange { unchanged, deletions_only, modified };

std::string_view to_string(RegionChange c);

// Hunks that touch a pre-side range. Deletions and replacements touch the
// lines they cover; an insertion touches the range when it lands strictly
// inside it (between two of its lines).
std::vector<const Hunk*> hunks_touching(const DiffResult& diff, const LineRange& pre_range);

RegionChange region_change_kind(const DiffResult& diff, const LineRange& pre_range);

// Rebuilds the post text lines from the pre lines and the hunks.
std::vector<std::string> apply_hunks(const DiffResult& diff,
                                     const std::vector<std::string>& pre_lines,
                                     const std::vector<std::string>& post_lines);

// Unified-diff-like text with three lines of context.
std::string render_unified(const DiffResult& diff, const std::vector<std::string>& pre_lines,
                           const std::vector<std::string>& post_lines);

nlohmann::json to_json(const DiffResult& diff);

// Diffs keyed by path: pre-side path for files present in pre, post-side path
// for files added in post.
class DiffSet {
 public:
  DiffSet() = default;
  explicit DiffSet(std::map<std::string, DiffResult> diffs) : diffs_(std::move(diffs)) {}

  const DiffResult* find(const std::string& path) const;
  // Throws ConfigError naming the file when absent.
  const DiffResult& at(const std::string& path) const;
  std::size_t size() const noexcept { return diffs_.size(); }
  const std::map<std::string, DiffResult>& all() const noexcept { return diffs_; }

 private:
  std::map<std::string, DiffResult> diffs_;
};

// Diffs every pre file against its post counterpart (identity for unchanged
// files, against an empty text for deleted ones) and every added file
// against an empty text. Runs on up to `jobs` threads.
DiffSet compute_diffs(const RevisionPair& pair, unsigned jobs = 1);

}  // namespace statictracker
