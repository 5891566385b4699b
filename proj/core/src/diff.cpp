#include "statictracker/diff.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "statictracker/errors.hpp"
#include "statictracker/parallel.hpp"
#include "statictracker/snapshot.hpp"

namespace statictracker {

std::string_view to_string(HunkKind k) {
  switch (k) {
    case HunkKind::insert: return "insert";
    case HunkKind::remove: return "delete";
    case HunkKind::replace: return "replace";
  }
  return "replace";
}

std::string_view to_string(RegionChange c) {
  switch (c) {
    case RegionChange::unchanged: return "unchanged";
    case RegionChange::deletions_only: return "deletions_only";
    case RegionChange::modified: return "modified";
  }
  return "modified";
}

namespace {

using Seq = std::vector<int>;
using MatchList = std::vector<std::pair<int, int>>;

// Myers' bisection: finds a point on a shortest edit path through
// a[alo,ahi) x b[blo,bhi) where the forward and reverse searches overlap.
// Both ranges are non-empty and share no common prefix or suffix.
std::pair<int, int> bisect(const Seq& a, int alo, int ahi, const Seq& b, int blo, int bhi) {
  const int n = ahi - alo;
  const int m = bhi - blo;
  const int max_d = (n + m + 1) / 2;
  const int v_offset = max_d;
  const int v_length = 2 * max_d + 2;
  std::vector<int> v1(static_cast<std::size_t>(v_length), -1);
  std::vector<int> v2(static_cast<std::size_t>(v_length), -1);
  v1[static_cast<std::size_t>(v_offset + 1)] = 0;
  v2[static_cast<std::size_t>(v_offset + 1)] = 0;
  const int delta = n - m;
  const bool front = (delta % 2) != 0;
  int k1start = 0, k1end = 0, k2start = 0, k2end = 0;
  auto at = [](std::vector<int>& v, int i) -> int& { return v[static_cast<std::size_t>(i)]; };

  for (int d = 0; d < max_d; ++d) {
    for (int k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
      const int k1_offset = v_offset + k1;
      int x1 = (k1 == -d || (k1 != d && at(v1, k1_offset - 1) < at(v1, k1_offset + 1)))
                   ? at(v1, k1_offset + 1)
                   : at(v1, k1_offset - 1) + 1;
      int y1 = x1 - k1;
      while (x1 < n && y1 < m && a[alo + x1] == b[blo + y1]) {
        ++x1;
        ++y1;
      }
      at(v1, k1_offset) = x1;
      if (x1 > n) {
        k1end += 2;
      } else if (y1 > m) {
        k1start += 2;
      } else if (front) {
        const int k2_offset = v_offset + delta - k1;
        if (k2_offset >= 0 && k2_offset < v_length && at(v2, k2_offset) != -1) {
          if (x1 >= n - at(v2, k2_offset)) return {x1, y1};
        }
      }
    }
    for (int k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
      const int k2_offset = v_offset + k2;
      int x2 = (k2 == -d || (k2 != d && at(v2, k2_offset - 1) < at(v2, k2_offset + 1)))
                   ? at(v2, k2_offset + 1)
                   : at(v2, k2_offset - 1) + 1;
      int y2 = x2 - k2;
      while (x2 < n && y2 < m && a[ahi - x2 - 1] == b[bhi - y2 - 1]) {
        ++x2;
        ++y2;
      }
      at(v2, k2_offset) = x2;
      if (x2 > n) {
        k2end += 2;
      } else if (y2 > m) {
        k2start += 2;
      } else if (!front) {
        const int k1_offset = v_offset + delta - k2;
        if (k1_offset >= 0 && k1_offset < v_length && at(v1, k1_offset) != -1) {
          const int x1 = at(v1, k1_offset);
          const int y1 = v_offset + x1 - k1_offset;
          if (x1 >= n - x2) return {x1, y1};
        }
      }
    }
  }
  return {-1, -1};
}

void diff_range(const Seq& a, int alo, int ahi, const Seq& b, int blo, int bhi, MatchList& out) {
  while (alo < ahi && blo < bhi && a[alo] == b[blo]) out.emplace_back(alo++, blo++);
  MatchList suffix;
  while (alo < ahi && blo < bhi && a[ahi - 1] == b[bhi - 1]) suffix.emplace_back(--ahi, --bhi);

  if (alo < ahi && blo < bhi) {
    const auto [x, y] = bisect(a, alo, ahi, b, blo, bhi);
    if (x >= 0) {
      diff_range(a, alo, alo + x, b, blo, blo + y, out);
      diff_range(a, alo + x, ahi, b, blo + y, bhi, out);
    }
  }
  out.insert(out.end(), suffix.rbegin(), suffix.rend());
}

}  // namespace

DiffResult compute_diff(const std::vector<std::string>& pre_lines,
                        const std::vector<std::string>& post_lines, const std::string& file_path,
                        const std::string& post_file_path) {
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&ids](const std::vector<std::string>& lines) {
    Seq seq;
    seq.reserve(lines.size());
    for (const auto& l : lines) {
      seq.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
    }
    return seq;
  };
  const Seq a = intern(pre_lines);
  const Seq b = intern(post_lines);

  MatchList matches;
  diff_range(a, 0, static_cast<int>(a.size()), b, 0, static_cast<int>(b.size()), matches);

  DiffResult out;
  out.file_path = file_path;
  out.post_file_path = post_file_path.empty() ? file_path : post_file_path;
  out.pre_line_count = static_cast<int>(a.size());
  out.post_line_count = static_cast<int>(b.size());
  out.line_map.reserve(matches.size());

  int prev_a = -1;
  int prev_b = -1;
  auto close_gap = [&](int next_a, int next_b) {
    const int pre_len = next_a - prev_a - 1;
    const int post_len = next_b - prev_b - 1;
    if (pre_len == 0 && post_len == 0) return;
    Hunk h;
    h.pre_start = prev_a + 2;
    h.pre_len = pre_len;
    h.post_start = prev_b + 2;
    h.post_len = post_len;
    h.kind = pre_len == 0 ? HunkKind::insert
             : post_len == 0 ? HunkKind::remove
                             : HunkKind::replace;
    out.hunks.push_back(h);
  };
  for (const auto& [i, j] : matches) {
    close_gap(i, j);
    out.line_map.emplace_back(i + 1, j + 1);
    prev_a = i;
    prev_b = j;
  }
  close_gap(static_cast<int>(a.size()), static_cast<int>(b.size()));
  return out;
}

DiffResult compute_diff(std::string_view pre_text, std::string_view post_text,
                        const std::string& file_path, const std::string& post_file_path) {
  return compute_diff(split_lines(pre_text), split_lines(post_text), file_path, post_file_path);
}

std::optional<int> DiffResult::map_pre_to_post(int pre_line) const {
  const auto it = std::lower_bound(line_map.begin(), line_map.end(), std::make_pair(pre_line, 0));
  if (it == line_map.end() || it->first != pre_line) return std::nullopt;
  return it->second;
}

AnchorOffset anchor_offset(const DiffResult& diff, int line, Side side) {
  const int count = side == Side::pre ? diff.pre_line_count : diff.post_line_count;
  if (line < 1 || line > count) {
    throw PreconditionError("line " + std::to_string(line) + " outside 1.." +
                            std::to_string(count) + " of " + diff.file_path);
  }
  AnchorOffset out{1, line - 1};
  for (const auto& h : diff.hunks) {
    const int start = side == Side::pre ? h.pre_start : h.post_start;
    if (start > line) break;
    out = AnchorOffset{start, line - start};
  }
  return out;
}

std::vector<const Hunk*> hunks_touching(const DiffResult& diff, const LineRange& pre_range) {
  std::vector<const Hunk*> out;
  for (const auto& h : diff.hunks) {
    if (h.pre_len == 0) {
      if (pre_range.start < h.pre_start && h.pre_start <= pre_range.end) out.push_back(&h);
    } else if (h.pre_start <= pre_range.end && h.pre_end() >= pre_range.start) {
      out.push_back(&h);
    }
  }
  return out;
}

RegionChange region_change_kind(const DiffResult& diff, const LineRange& pre_range) {
  const auto touching = hunks_touching(diff, pre_range);
  if (touching.empty()) return RegionChange::unchanged;
  const bool all_deletes = std::all_of(touching.begin(), touching.end(),
                                       [](const Hunk* h) { return h->kind == HunkKind::remove; });
  return all_deletes ? RegionChange::deletions_only : RegionChange::modified;
}

std::vector<std::string> apply_hunks(const DiffResult& diff,
                                     const std::vector<std::string>& pre_lines,
                                     const std::vector<std::string>& post_lines) {
  std::vector<std::string> out;
  out.reserve(post_lines.size());
  std::size_t pre_pos = 0;  // 0-based next pre line to copy
  for (const auto& h : diff.hunks) {
    const auto hunk_pre = static_cast<std::size_t>(h.pre_start - 1);
    while (pre_pos < hunk_pre && pre_pos < pre_lines.size()) out.push_back(pre_lines[pre_pos++]);
    for (int k = 0; k < h.post_len; ++k) {
      const auto idx = static_cast<std::size_t>(h.post_start - 1 + k);
      if (idx < post_lines.size()) out.push_back(post_lines[idx]);
    }
    pre_pos += static_cast<std::size_t>(h.pre_len);
  }
  while (pre_pos < pre_lines.size()) out.push_back(pre_lines[pre_pos++]);
  return out;
}

std::string render_unified(const DiffResult& diff, const std::vector<std::string>& pre_lines,
                           const std::vector<std::string>& post_lines) {
  constexpr int kContext = 3;
  std::ostringstream os;
  os << "--- " << diff.file_path << "\n+++ " << diff.post_file_path << "\n";
  for (const auto& h : diff.hunks) {
    const int ctx_before = std::min(kContext, h.pre_start - 1);
    const int pre_tail = std::min(kContext, diff.pre_line_count - h.pre_end());
    const int post_tail = std::min(kContext, diff.post_line_count - h.post_end());
    const int tail = std::max(0, std::min(pre_tail, post_tail));
    const int pre_from = h.pre_start - ctx_before;
    const int post_from = h.post_start - ctx_before;
    os << "@@ -" << pre_from << "," << (ctx_before + h.pre_len + tail) << " +" << post_from << ","
       << (ctx_before + h.post_len + tail) << " @@ " << to_string(h.kind) << "\n";
    for (int l = pre_from; l < h.pre_start; ++l) os << " " << pre_lines[static_cast<std::size_t>(l - 1)] << "\n";
    for (int l = h.pre_start; l <= h.pre_end(); ++l) os << "-" << pre_lines[static_cast<std::size_t>(l - 1)] << "\n";
    for (int l = h.post_start; l <= h.post_end(); ++l) os << "+" << post_lines[static_cast<std::size_t>(l - 1)] << "\n";
    for (int l = h.pre_end() + 1; l <= h.pre_end() + tail; ++l) os << " " << pre_lines[static_cast<std::size_t>(l - 1)] << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const DiffResult& diff) {
  auto hunks = nlohmann::json::array();
  for (const auto& h : diff.hunks) {
    hunks.push_back({{"kind", std::string(to_string(h.kind))},
                     {"pre_start", h.pre_start},
                     {"pre_len", h.pre_len},
                     {"post_start", h.post_start},
                     {"post_len", h.post_len}});
  }
  auto line_map = nlohmann::json::array();
  for (const auto& [a, b] : diff.line_map) line_map.push_back({a, b});
  return {{"file_path", diff.file_path},
          {"post_file_path", diff.post_file_path},
          {"pre_line_count", diff.pre_line_count},
          {"post_line_count", diff.post_line_count},
          {"hunks", std::move(hunks)},
          {"line_map", std::move(line_map)}};
}

const DiffResult* DiffSet::find(const std::string& path) const {
  const auto it = diffs_.find(path);
  return it == diffs_.end() ? nullptr : &it->second;
}

const DiffResult& DiffSet::at(const std::string& path) const {
  if (const auto* d = find(path)) return *d;
  throw ConfigError("no diff computed for file " + path);
}

DiffSet compute_diffs(const RevisionPair& pair, unsigned jobs) {
  struct Job {
    std::string key;
    const SourceFile* pre = nullptr;
    const SourceFile* post = nullptr;
    std::string post_path;
  };
  std::vector<Job> work;
  for (const auto& p : pair.pre().paths()) {
    const auto post_path = pair.post_path_of(p);
    work.push_back({p, pair.pre().find(p), pair.post().find(post_path), post_path});
  }
  std::set<std::string> rename_targets;
  for (const auto& [_, target] : pair.rename_map()) rename_targets.insert(target);
  for (const auto& p : pair.post().paths()) {
    // A post path that is also a pre path already has its key.
    if (!pair.pre().contains(p) && !rename_targets.contains(p)) {
      work.push_back({p, nullptr, pair.post().find(p), p});
    }
  }

  static const std::vector<std::string> kEmpty;
  std::vector<DiffResult> results(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    const auto& job = work[i];
    const auto& pre_lines = job.pre ? job.pre->lines() : kEmpty;
    const auto& post_lines = job.post ? job.post->lines() : kEmpty;
    if (job.pre && job.post && !pair.is_changed(job.key)) {
      DiffResult identity;
      identity.file_path = job.key;
      identity.post_file_path = job.post_path;
      identity.pre_line_count = job.pre->line_count();
      identity.post_line_count = job.post->line_count();
      identity.line_map.reserve(pre_lines.size());
      for (int l = 1; l <= identity.pre_line_count; ++l) identity.line_map.emplace_back(l, l);
      results[i] = std::move(identity);
      return;
    }
    results[i] = compute_diff(pre_lines, post_lines, job.key, job.post_path);
  });

  std::map<std::string, DiffResult> out;
  for (std::size_t i = 0; i < work.size(); ++i) out.emplace(work[i].key, std::move(results[i]));
  return DiffSet(std::move(out));
}

}  // namespace statictracker
