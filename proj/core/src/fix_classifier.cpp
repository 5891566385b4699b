#include "statictracker/fix_classifier.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "statictracker/parallel.hpp"

namespace statictracker {

RepairScope::RepairScope(std::vector<LineRange> ranges) {
  for (const auto& r : ranges) add(r);
}

void RepairScope::add(LineRange r) {
  ranges_.push_back(r);
  std::sort(ranges_.begin(), ranges_.end());
  std::vector<LineRange> merged;
  for (const auto& x : ranges_) {
    if (!merged.empty() && x.start <= merged.back().end + 1) {
      merged.back().end = std::max(merged.back().end, x.end);
    } else {
      merged.push_back(x);
    }
  }
  ranges_ = std::move(merged);
}

std::string_view to_string(FixRule r) {
  switch (r) {
    case FixRule::file_deleted: return "file_deleted";
    case FixRule::deleted_context: return "deleted_context";
    case FixRule::declaration_modified: return "declaration_modified";
    case FixRule::declaration_unmodified: return "declaration_unmodified";
    case FixRule::scope_unchanged: return "scope_unchanged";
    case FixRule::scope_deletions_only: return "scope_deletions_only";
    case FixRule::field_modified: return "field_modified";
    case FixRule::field_untouched: return "field_untouched";
    case FixRule::tail_scope_unchanged: return "tail_scope_unchanged";
    case FixRule::default_fix: return "default_fix";
  }
  return "default_fix";
}

std::optional<FixRule> fix_rule_from_string(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(FixRule::default_fix); ++k) {
    if (to_string(static_cast<FixRule>(k)) == name) return static_cast<FixRule>(k);
  }
  return std::nullopt;
}

bool is_fix(FixRule r) {
  return r == FixRule::declaration_modified || r == FixRule::field_modified ||
         r == FixRule::default_fix;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool mentions_word(std::string_view line, std::string_view word) {
  if (word.empty()) return false;
  for (auto pos = line.find(word); pos != std::string_view::npos; pos = line.find(word, pos + 1)) {
    const bool left = pos == 0 || !is_ident_char(line[pos - 1]);
    const auto after = pos + word.size();
    const bool right = after >= line.size() || !is_ident_char(line[after]);
    if (left && right) return true;
  }
  return false;
}

// Pre lines of `range` covered by hunks; deletions_only restricts to delete
// hunks.
bool fully_covered(const DiffResult& diff, const LineRange& range, bool deletions_only) {
  int next = range.start;
  for (const auto& h : diff.hunks) {
    if (h.pre_len == 0) continue;
    if (deletions_only && h.kind != HunkKind::remove) continue;
    if (h.pre_start <= next && h.pre_end() >= next) next = h.pre_end() + 1;
    if (next > range.end) return true;
  }
  return next > range.end;
}

bool post_has_decl(const DeclIndex* post, const Decl& d) {
  if (!post) return false;
  const auto& list = d.kind == DeclKind::class_decl ? post->classes
                     : d.kind == DeclKind::method   ? post->methods
                                                    : post->fields;
  return std::any_of(list.begin(), list.end(), [&](const Decl& x) { return x.name == d.name; });
}

bool is_deleted(const Decl& d, const DiffResult& diff, const DeclIndex* post) {
  if (fully_covered(diff, d.range(), true)) return true;
  return fully_covered(diff, d.range(), false) && !post_has_decl(post, d);
}

bool is_declaration_modified(const Decl& d, const DiffResult& diff, const SourceFile* pre_file,
                             const SourceFile* post_file) {
  const int line = d.declaration_line;
  for (const auto& h : diff.hunks) {
    if (h.kind != HunkKind::replace || line < h.pre_start || line > h.pre_end()) continue;
    const auto pre_text = pre_file ? pre_file->line(line) : std::nullopt;
    const int post_line = h.post_start + (line - h.pre_start);
    if (post_line > h.post_end()) return true;
    const auto post_text = post_file ? post_file->line(post_line) : std::nullopt;
    if (!pre_text || !post_text) return true;
    return trim(*pre_text) != trim(*post_text);
  }
  return false;
}

bool scope_mentions(const std::vector<const Hunk*>& touching, const LineRange& scope,
                    std::string_view name, const SourceFile* pre_file,
                    const SourceFile* post_file) {
  for (const Hunk* h : touching) {
    for (int l = std::max(h->pre_start, scope.start); l <= std::min(h->pre_end(), scope.end); ++l) {
      const auto text = pre_file ? pre_file->line(l) : std::nullopt;
      if (text && mentions_word(*text, name)) return true;
    }
    for (int l = h->post_start; l <= h->post_end(); ++l) {
      const auto text = post_file ? post_file->line(l) : std::nullopt;
      if (text && mentions_word(*text, name)) return true;
    }
  }
  return false;
}

}  // namespace

FixDecision classify_one(const WarningInstance& w, const RevisionPair& pair, const DiffSet& diffs,
                         const DeclIndex& pre_index, const DeclIndex* post_index) {
  FixDecision out{w.stable_id, FixRule::default_fix};
  const DiffResult& diff = diffs.at(w.file_path);
  if (pair.is_deleted(w.file_path)) {
    out.rule = FixRule::file_deleted;
    return out;
  }
  const SourceFile* pre_file = pair.pre().find(w.file_path);
  const SourceFile* post_file = pair.post().find(pair.post_path_of(w.file_path));
  const auto ctx = locate_context(w, pre_index);
  const std::optional<Decl>* located[] = {&ctx.field, &ctx.mth, &ctx.cls};

  for (const auto* d : located) {
    if (*d && is_deleted(**d, diff, post_index)) {
      out.rule = FixRule::deleted_context;
      return out;
    }
  }

  const LineRange wrange{w.start_line, w.end_line};
  for (const auto* d : located) {
    if (*d && (*d)->range() == wrange) {
      out.rule = is_declaration_modified(**d, diff, pre_file, post_file)
                     ? FixRule::declaration_modified
                     : FixRule::declaration_unmodified;
      return out;
    }
  }

  std::optional<LineRange> scope;
  if (ctx.mth && ctx.mth->range().contains(wrange)) {
    scope = ctx.mth->range();
  } else if (!ctx.mth && ctx.cls && ctx.cls->range().contains(wrange)) {
    scope = ctx.cls->range();
  }
  if (scope) {
    const auto touching = hunks_touching(diff, *scope);
    if (touching.empty()) {
      out.rule = FixRule::scope_unchanged;
      return out;
    }
    if (std::all_of(touching.begin(), touching.end(),
                    [](const Hunk* h) { return h->kind == HunkKind::remove; })) {
      out.rule = FixRule::scope_deletions_only;
      return out;
    }
    if (ctx.field) {
      out.rule = scope_mentions(touching, *scope, ctx.field->name, pre_file, post_file)
                     ? FixRule::field_modified
                     : FixRule::field_untouched;
      return out;
    }
    if (w.start_line == w.end_line) {
      const LineRange tail{w.end_line, scope->end};
      if (hunks_touching(diff, tail).empty()) {
        out.rule = FixRule::tail_scope_unchanged;
        return out;
      }
    }
  }
  return out;
}

DeclIndexMap build_decl_indices(const Snapshot& snapshot, const std::vector<std::string>& paths,
                                unsigned jobs) {
  std::vector<std::string> present;
  for (const auto& p : paths) {
    if (snapshot.contains(p)) present.push_back(p);
  }
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  std::vector<DeclIndex> built(present.size());
  parallel_for(present.size(), jobs, [&](std::size_t i) {
    built[i] = build_decl_index(snapshot.find(present[i])->text(), present[i]);
  });
  DeclIndexMap out;
  for (std::size_t i = 0; i < present.size(); ++i) out.emplace(present[i], std::move(built[i]));
  return out;
}

FixClassification classify_removed(std::span<const WarningInstance> removed,
                                   const RevisionPair& pair, const DiffSet& diffs,
                                   const DeclIndexMap& pre_indices,
                                   const DeclIndexMap& post_indices, unsigned jobs) {
  std::vector<FixDecision> decisions(removed.size());
  const DeclIndex empty_index;
  parallel_for(removed.size(), jobs, [&](std::size_t i) {
    const auto& w = removed[i];
    const auto pre_it = pre_indices.find(w.file_path);
    const auto post_it = post_indices.find(pair.post_path_of(w.file_path));
    decisions[i] = classify_one(w, pair, diffs,
                                pre_it == pre_indices.end() ? empty_index : pre_it->second,
                                post_it == post_indices.end() ? nullptr : &post_it->second);
  });
  std::sort(decisions.begin(), decisions.end(),
            [](const FixDecision& a, const FixDecision& b) { return a.id < b.id; });
  FixClassification out;
  for (const auto& d : decisions) (d.fix() ? out.fix : out.non_fix).push_back(d.id);
  out.trace = std::move(decisions);
  return out;
}

}  // namespace statictracker
