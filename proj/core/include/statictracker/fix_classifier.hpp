#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statictracker/decl_index.hpp"
#include "statictracker/diff.hpp"
#include "statictracker/snapshot.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

// Normalised set of pre-side line ranges: sorted, overlapping or adjacent
// ranges merged.
class RepairScope {
 public:
  RepairScope() = default;
  explicit RepairScope(std::vector<LineRange> ranges);

  void add(LineRange r);
  const std::vector<LineRange>& ranges() const noexcept { return ranges_; }
  bool empty() const noexcept { return ranges_.empty(); }

 private:
  std::vector<LineRange> ranges_;
};

// Why a removed warning got its label. Each tag names one branch.
enum class FixRule {
  file_deleted,            // non-fix
  deleted_context,         // non-fix
  declaration_modified,    // fix
  declaration_unmodified,  // non-fix
  scope_unchanged,         // non-fix
  scope_deletions_only,    // non-fix
  field_modified,          // fix
  field_untouched,         // non-fix
  tail_scope_unchanged,    // non-fix
  default_fix,             // fix
};

std::string_view to_string(FixRule r);
std::optional<FixRule> fix_rule_from_string(std::string_view name);
bool is_fix(FixRule r);

struct FixDecision {
  StableId id;
  FixRule rule = FixRule::default_fix;
  bool fix() const { return is_fix(rule); }
};

using DeclIndexMap = std::map<std::string, DeclIndex>;

// Builds declaration indices for the given paths of one snapshot (paths the
// snapshot lacks are skipped).
DeclIndexMap build_decl_indices(const Snapshot& snapshot, const std::vector<std::string>& paths,
                                unsigned jobs = 1);

// Labels one removed warning. `post_index` may be null when the file has no
// post-side counterpart. Throws ConfigError when no diff covers the file.
FixDecision classify_one(const WarningInstance& w, const RevisionPair& pair, const DiffSet& diffs,
                         const DeclIndex& pre_index, const DeclIndex* post_index);

struct FixClassification {
  std::vector<StableId> fix;
  std::vector<StableId> non_fix;
  std::vector<FixDecision> trace;  // sorted by id
};

FixClassification classify_removed(std::span<const WarningInstance> removed,
                                   const RevisionPair& pair, const DiffSet& diffs,
                                   const DeclIndexMap& pre_indices,
                                   const DeclIndexMap& post_indices, unsigned jobs = 1);

}  // namespace statictracker
