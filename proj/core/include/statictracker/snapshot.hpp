#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace statictracker {

// Splits on '\n'. A trailing newline does not open an extra empty line, so
// "a\nb\n" and "a\nb" both have two lines and "" has none.
std::vector<std::string> split_lines(std::string_view text);

// Replaces every ill-formed UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

// A source file's bytes plus its line table. Immutable once built.
class SourceFile {
 public:
  explicit SourceFile(std::string text);

  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& lines() const noexcept { return lines_; }
  int line_count() const noexcept { return static_cast<int>(lines_.size()); }
  // 1-based; nullopt when out of range.
  std::optional<std::string_view> line(int number) const;

 private:
  std::string text_;
  std::vector<std::string> lines_;
};

// Source tree of one revision, keyed by '/'-separated relative path.
class Snapshot {
 public:
  Snapshot() = default;
  explicit Snapshot(std::string label) : label_(std::move(label)) {}

  // Throws ValidationError on absolute paths or "." / ".." segments.
  void add_file(std::string path, std::string text);

  const std::string& label() const noexcept { return label_; }
  const SourceFile* find(const std::string& path) const;
  bool contains(const std::string& path) const { return files_.contains(path); }
  std::size_t size() const noexcept { return files_.size(); }
  std::vector<std::string> paths() const;

  // Files that could not be read during load_snapshot.
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }
  void add_diagnostic(std::string message) { diagnostics_.push_back(std::move(message)); }

 private:
  std::string label_;
  std::map<std::string, std::shared_ptr<const SourceFile>> files_;
  std::vector<std::string> diagnostics_;
};

struct SnapshotOptions {
  std::vector<std::string> extensions{".java", ".scala"};
};

// Loads every file under `root` whose extension is in the filter. Throws
// IoError when the root is missing or unreadable; unreadable files are
// skipped and recorded in diagnostics().
Snapshot load_snapshot(const std::filesystem::path& root, std::string label,
                       const SnapshotOptions& options = {});

using RenameMap = std::map<std::string, std::string>;

// Parses the `--renames` document: [{"pre_path": ..., "post_path": ...}].
RenameMap parse_renames(std::string_view json_text);

class RevisionPair {
 public:
  RevisionPair(Snapshot pre, Snapshot post, RenameMap renames, std::set<std::string> changed);

  const Snapshot& pre() const noexcept { return pre_; }
  const Snapshot& post() const noexcept { return post_; }
  const RenameMap& rename_map() const noexcept { return renames_; }
  const std::set<std::string>& changed_files() const noexcept { return changed_; }

  bool is_changed(const std::string& path) const { return changed_.contains(path); }
  // Post-side path of a pre-side file: the rename target, else the same path.
  std::string post_path_of(const std::string& pre_path) const;
  // True when the pre file has no counterpart in post.
  bool is_deleted(const std::string& pre_path) const;

 private:
  Snapshot pre_;
  Snapshot post_;
  RenameMap renames_;
  std::set<std::string> changed_;
};

// Completes the supplied renames with byte-identical moves (a pre-only file
// whose content equals a post-only file's) and derives the changed-file set.
// Entries naming a path absent from its side are dropped. Throws
// ValidationError when the remaining renames are not injective.
RevisionPair compute_revision_pair(Snapshot pre, Snapshot post, RenameMap renames = {});

}  // namespace statictracker
