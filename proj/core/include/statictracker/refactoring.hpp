#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statictracker/diff.hpp"
#include "statictracker/snapshot.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

// How a refactoring kind selects and rewrites warnings.
enum class RefactoringScope {
  class_level,      // class name (or an inner-class prefix of it) and file path
  class_member,     // a member carried to another class: Extract{Class,Superclass,Interface}
  method,           // method name, class, file
  method_fragment,  // like `method`, restricted to the fragment's line range
  field,            // field name, class, file
  variable,         // local variable/parameter reported in the Field slot
  path_prefix,      // directory (and package) prefixes
  inert,            // unknown kind: never applies
};

std::string_view to_string(RefactoringScope s);

// The built-in kinds and their scopes.
const std::map<std::string, RefactoringScope, std::less<>>& builtin_refactoring_kinds();

struct Locator {
  std::string file_path;
  std::string class_name;
  std::optional<std::string> method_name;
  std::optional<std::string> field_name;
  std::optional<LineRange> lines;

  friend bool operator==(const Locator&, const Locator&) = default;
};

struct RefactoringRecord {
  std::string kind;
  RefactoringScope scope = RefactoringScope::inert;
  Locator before;
  Locator after;
  std::size_t index = 0;  // position in the input array

  bool inert() const noexcept { return scope == RefactoringScope::inert; }
};

class RefactoringSet {
 public:
  RefactoringSet() = default;
  explicit RefactoringSet(std::vector<RefactoringRecord> records) : records_(std::move(records)) {}

  const std::vector<RefactoringRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<RefactoringRecord> records_;
};

struct RefactoringOptions {
  // Additional kind names, e.g. {"MergeClass", class_level}.
  std::map<std::string, RefactoringScope, std::less<>> extra_kinds;
};

// Parses [{"kind", "before": Locator, "after": Locator}]. A Locator object
// has file_path, class_name and optionally method_name, field_name,
// start_line/end_line. Unknown kinds are kept but inert.
RefactoringSet parse_refactorings(std::string_view json_text, const RefactoringOptions& options = {});

// Parses the extra-kinds config: {"KindName": "class_level" | "method" | ...}.
RefactoringOptions parse_refactoring_options(std::string_view json_text);

// True when `record`'s before-locator selects `w`.
bool applies_to(const RefactoringRecord& record, const WarningInstance& w);

// Returns a copy of `w` with file_path, class/method/field names replaced by
// every applicable record's after-values. Records are matched against `w` as
// given and applied in input order. Throws ConflictError when two records
// set one field to different values.
WarningInstance rewrite_metadata(const WarningInstance& w, const RefactoringSet& refs);

// File moves implied by class-level records whose before and after files
// differ.
RenameMap renames_from_refactorings(const RefactoringSet& refs);

}  // namespace statictracker
