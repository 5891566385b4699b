// The SOTA and StaticTracker pipelines and TrackResult serialisation.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "statictracker/errors.hpp"
#include "statictracker/matcher.hpp"
#include "statictracker/parallel.hpp"

namespace statictracker {
namespace {

std::string post_side_path(const DiffResult& diff) {
  return diff.post_file_path.empty() ? diff.file_path : diff.post_file_path;
}

// Post-side file a pre warning is compared against: where a refactoring
// moved it, else where the file was renamed to, else the same path.
std::string target_file(const WarningInstance& original, const WarningInstance& rewritten,
                        const RevisionPair& pair) {
  if (rewritten.file_path != original.file_path) return rewritten.file_path;
  return pair.post_path_of(original.file_path);
}

class ExactIndex {
 public:
  explicit ExactIndex(const WarningSet& post) {
    for (std::size_t j = 0; j < post.size(); ++j) {
      index_[exact_key(post.warnings()[j])].push_back(j);
    }
  }
  // First post warning with this key that is not consumed yet.
  std::optional<std::size_t> take(const ExactKey& key, std::vector<char>& consumed) {
    const auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    auto& queue = it->second;
    while (!queue.empty() && consumed[queue.front()]) queue.pop_front();
    if (queue.empty()) return std::nullopt;
    const auto j = queue.front();
    queue.pop_front();
    consumed[j] = 1;
    return j;
  }

 private:
  std::unordered_map<ExactKey, std::deque<std::size_t>, ExactKeyHash> index_;
};

struct MatchState {
  std::vector<std::optional<std::size_t>> pre_to_post;
  std::vector<std::string> strategy;
  std::vector<char> consumed;

  MatchState(std::size_t pre, std::size_t post)
      : pre_to_post(pre), strategy(pre), consumed(post, 0) {}

  void link(std::size_t i, std::size_t j, std::string tag) {
    pre_to_post[i] = j;
    strategy[i] = std::move(tag);
    consumed[j] = 1;
  }
};

TrackResult assemble(TrackMode mode, const WarningSet& pre, const WarningSet& post,
                     const MatchState& state, const RevisionPair& pair, const DiffSet& diffs,
                     const MatcherConfig& cfg, Diagnostics& diags) {
  TrackResult out;
  out.mode = mode;
  std::vector<WarningInstance> removed;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const auto& w = pre.warnings()[i];
    if (const auto j = state.pre_to_post[i]) {
      const auto& b = post.warnings()[*j];
      out.pairs.push_back({w.stable_id, b.stable_id, state.strategy[i]});
      out.persistent_pre.push_back(w.stable_id);
      out.persistent_post.push_back(b.stable_id);
    } else {
      removed.push_back(w);
    }
  }
  for (std::size_t j = 0; j < post.size(); ++j) {
    if (!state.consumed[j]) out.newly_introduced.push_back(post.warnings()[j].stable_id);
  }

  std::vector<std::string> pre_paths, post_paths;
  for (const auto& w : removed) {
    pre_paths.push_back(w.file_path);
    post_paths.push_back(pair.post_path_of(w.file_path));
  }
  const auto pre_indices = build_decl_indices(pair.pre(), pre_paths, cfg.jobs);
  const auto post_indices = build_decl_indices(pair.post(), post_paths, cfg.jobs);
  auto classes = classify_removed(removed, pair, diffs, pre_indices, post_indices, cfg.jobs);
  out.removed_fix = std::move(classes.fix);
  out.removed_non_fix = std::move(classes.non_fix);
  out.fix_decisions = std::move(classes.trace);
  const auto fallthrough = std::count_if(out.fix_decisions.begin(), out.fix_decisions.end(),
                                         [](const auto& d) { return d.rule == FixRule::default_fix; });
  if (fallthrough > 0) {
    diags.add("fix classifier: " + std::to_string(fallthrough) + " of " +
              std::to_string(out.fix_decisions.size()) +
              " removed warnings fell through to the default fix rule");
  }

  auto by_id = [](const StableId& a, const StableId& b) { return a < b; };
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& a, const auto& b) { return a.pre_id < b.pre_id; });
  for (auto* list : {&out.removed_fix, &out.removed_non_fix, &out.newly_introduced,
                     &out.persistent_pre, &out.persistent_post}) {
    std::sort(list->begin(), list->end(), by_id);
  }
  out.diagnostics = diags.sorted();
  return out;
}

// Diffs of every changed pre file a warning lives in; fails fast when one is
// missing.
void require_diffs(const WarningSet& pre, const RevisionPair& pair, const DiffSet& diffs) {
  for (const auto& w : pre) {
    if (pair.is_changed(w.file_path)) diffs.at(w.file_path);
  }
}

using PartitionKey = std::tuple<std::string, std::string, std::string, std::string, std::string>;

PartitionKey partition_key(const WarningInstance& names, const std::string& file) {
  return {names.warning_type, names.class_name, names.method_name, names.field_name, file};
}

}  // namespace

TrackResult track_sota(const WarningSet& pre, const WarningSet& post, const RevisionPair& pair,
                       const DiffSet& diffs, const MatcherConfig& cfg) {
  validate(cfg);
  require_diffs(pre, pair, diffs);
  Diagnostics diags;
  MatchState state(pre.size(), post.size());
  const auto pre_w = pre.warnings();
  const auto post_w = post.warnings();

  ExactIndex exact(post);
  for (std::size_t i = 0; i < pre_w.size(); ++i) {
    ExactKey key = exact_key(pre_w[i]);
    key.file_path = pair.post_path_of(pre_w[i].file_path);
    if (const auto j = exact.take(key, state.consumed)) state.link(i, *j, "exact");
  }

  std::map<std::string, std::vector<std::size_t>> post_by_file;
  for (std::size_t j = 0; j < post_w.size(); ++j) post_by_file[post_w[j].file_path].push_back(j);
  std::vector<std::size_t> all_post(post_w.size());
  std::iota(all_post.begin(), all_post.end(), 0);
  const std::vector<std::size_t> none;

  enum class Stage { location, snippet, hash };
  for (const Stage stage : {Stage::location, Stage::snippet, Stage::hash}) {
    for (std::size_t i = 0; i < pre_w.size(); ++i) {
      const auto& a = pre_w[i];
      if (state.pre_to_post[i] || !pair.is_changed(a.file_path)) continue;
      const std::string target = pair.post_path_of(a.file_path);
      const DiffResult& diff = diffs.at(a.file_path);
      const bool diff_fits = post_side_path(diff) == target;
      const auto it = post_by_file.find(target);
      const auto& candidates =
          stage == Stage::hash ? all_post : (it == post_by_file.end() ? none : it->second);
      for (const auto j : candidates) {
        const auto& b = post_w[j];
        if (state.consumed[j] || a.warning_type != b.warning_type) continue;
        bool ok = false;
        switch (stage) {
          case Stage::location: ok = diff_fits && location_match(a, b, diff, cfg, &diags); break;
          case Stage::snippet: ok = snippet_match(a, b, pair.pre(), pair.post(), cfg, &diags); break;
          case Stage::hash: ok = hash_match(a, b, pair.pre(), pair.post(), cfg, &diags); break;
        }
        if (ok) {
          state.link(i, j,
                     stage == Stage::location ? "location"
                     : stage == Stage::snippet ? "snippet"
                                               : "hash");
          break;
        }
      }
    }
  }
  return assemble(TrackMode::sota, pre, post, state, pair, diffs, cfg, diags);
}

CandidateMatrix build_candidate_matrix(std::span<const WarningInstance> pre_original,
                                       std::span<const WarningInstance> pre_rewritten,
                                       std::span<const WarningInstance> post,
                                       const RevisionPair& pair, const DiffSet& diffs,
                                       const MatcherConfig& cfg, Diagnostics* diags) {
  CandidateMatrix m;
  m.weights.assign(pre_original.size(), std::vector<int>(post.size(), 0));
  for (const auto& b : post) {
    m.post_ids.push_back(b.stable_id);
    m.post_lines.push_back(b.start_line);
  }
  for (std::size_t i = 0; i < pre_original.size(); ++i) {
    const auto& orig = pre_original[i];
    const auto& rw = pre_rewritten[i];
    m.pre_ids.push_back(orig.stable_id);
    m.pre_lines.push_back(orig.start_line);
    WarningInstance view = orig;
    view.class_name = rw.class_name;
    view.method_name = rw.method_name;
    view.field_name = rw.field_name;
    const std::string target = target_file(orig, rw, pair);
    const DiffResult* diff = diffs.find(orig.file_path);
    const bool diff_fits = diff && post_side_path(*diff) == target;
    for (std::size_t j = 0; j < post.size(); ++j) {
      const auto& b = post[j];
      if (b.file_path != target || partition_key(view, target) != partition_key(b, b.file_path)) {
        continue;
      }
      int w = 0;
      if (snippet_match(view, b, pair.pre(), pair.post(), cfg, diags)) ++w;
      if (diff_fits && location_match(view, b, *diff, cfg, diags)) ++w;
      m.weights[i][j] = w;
    }
  }
  return m;
}

TrackResult track_statictracker(const WarningSet& pre, const WarningSet& post,
                                const RevisionPair& pair, const DiffSet& diffs,
                                const RefactoringSet& refs, const MatcherConfig& cfg) {
  validate(cfg);
  require_diffs(pre, pair, diffs);
  Diagnostics diags;
  const WarningSet npre = normalize_volatile_identifiers(pre);
  const WarningSet npost = normalize_volatile_identifiers(post);
  const auto pre_w = npre.warnings();
  const auto post_w = npost.warnings();
  MatchState state(pre_w.size(), post_w.size());

  ExactIndex exact(npost);
  for (std::size_t i = 0; i < pre_w.size(); ++i) {
    if (pair.is_changed(pre_w[i].file_path)) continue;
    ExactKey key = exact_key(pre_w[i]);
    key.file_path = pair.post_path_of(pre_w[i].file_path);
    if (const auto j = exact.take(key, state.consumed)) state.link(i, *j, "exact");
  }

  // Rewrite against the detector's own names, then normalise the result.
  const auto raw_pre = pre.warnings();
  std::vector<WarningInstance> rewritten(pre_w.size());
  for (std::size_t i = 0; i < pre_w.size(); ++i) {
    if (state.pre_to_post[i]) continue;
    rewritten[i] = normalize_volatile_identifiers(rewrite_metadata(raw_pre[i], refs));
  }

  struct Partition {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
  };
  std::map<PartitionKey, Partition> partitions;
  for (std::size_t i = 0; i < pre_w.size(); ++i) {
    if (state.pre_to_post[i]) continue;
    const auto target = target_file(pre_w[i], rewritten[i], pair);
    partitions[partition_key(rewritten[i], target)].rows.push_back(i);
  }
  for (std::size_t j = 0; j < post_w.size(); ++j) {
    if (state.consumed[j]) continue;
    const auto it = partitions.find(partition_key(post_w[j], post_w[j].file_path));
    if (it != partitions.end()) it->second.cols.push_back(j);
  }

  std::vector<const Partition*> work;
  for (const auto& [key, part] : partitions) {
    if (!part.cols.empty()) work.push_back(&part);
  }
  struct Found {
    std::size_t i, j;
    std::string tag;
  };
  std::vector<std::vector<Found>> found(work.size());
  parallel_for(work.size(), cfg.jobs, [&](std::size_t k) {
    const auto& part = *work[k];
    std::vector<WarningInstance> orig, rw, cols;
    for (const auto i : part.rows) {
      orig.push_back(pre_w[i]);
      rw.push_back(rewritten[i]);
    }
    for (const auto j : part.cols) cols.push_back(post_w[j]);
    const auto matrix = build_candidate_matrix(orig, rw, cols, pair, diffs, cfg, &diags);
    for (const auto& [r, c] : solve_assignment(matrix)) {
      WarningInstance view = orig[r];
      view.class_name = rw[r].class_name;
      view.method_name = rw[r].method_name;
      view.field_name = rw[r].field_name;
      const bool snip = snippet_match(view, cols[c], pair.pre(), pair.post(), cfg);
      std::string tag = matrix.at(r, c) == 2 ? "snippet+location" : snip ? "snippet" : "location";
      found[k].push_back({part.rows[r], part.cols[c], std::move(tag)});
    }
  });
  for (auto& list : found) {
    for (auto& f : list) state.link(f.i, f.j, std::move(f.tag));
  }
  return assemble(TrackMode::statictracker, pre, post, state, pair, diffs, cfg, diags);
}

TrackResult track(const WarningSet& pre, const WarningSet& post, const RevisionPair& pair,
                  const DiffSet& diffs, const RefactoringSet& refs, const MatcherConfig& cfg) {
  return cfg.mode == TrackMode::sota ? track_sota(pre, post, pair, diffs, cfg)
                                     : track_statictracker(pre, post, pair, diffs, refs, cfg);
}

nlohmann::json to_json(const TrackResult& r) {
  auto ids = [](const std::vector<StableId>& list) {
    auto arr = nlohmann::json::array();
    for (const auto& id : list) arr.push_back(id.str());
    return arr;
  };
  auto pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"pre_id", p.pre_id.str()}, {"post_id", p.post_id.str()}, {"strategy", p.strategy}});
  }
  auto decisions = nlohmann::json::array();
  for (const auto& d : r.fix_decisions) {
    decisions.push_back({{"id", d.id.str()},
                         {"rule", std::string(to_string(d.rule))},
                         {"status", d.fix() ? "removed_fix" : "removed_non_fix"}});
  }
  return {
      {"mode", std::string(to_string(r.mode))},
      {"pairs", pairs},
      {"removed_fix", ids(r.removed_fix)},
      {"removed_non_fix", ids(r.removed_non_fix)},
      {"newly_introduced", ids(r.newly_introduced)},
      {"persistent_pre", ids(r.persistent_pre)},
      {"persistent_post", ids(r.persistent_post)},
      {"counts",
       {{"persistent", r.pairs.size()},
        {"removed_fix", r.removed_fix.size()},
        {"removed_non_fix", r.removed_non_fix.size()},
        {"newly_introduced", r.newly_introduced.size()}}},
      {"fix_decisions", decisions},
      {"diagnostics", r.diagnostics},
  };
}

namespace {

StableId id_from_json(const nlohmann::json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": id must be a string");
  const auto id = StableId::parse(v.get<std::string>());
  if (!id) throw ValidationError(where + ": malformed id '" + v.get<std::string>() + "'");
  return *id;
}

std::vector<StableId> id_list(const nlohmann::json& doc, const char* key) {
  std::vector<StableId> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc[key];
  if (!arr.is_array()) throw ValidationError(std::string("result: ") + key + " must be an array");
  for (const auto& v : arr) out.push_back(id_from_json(v, std::string("result.") + key));
  return out;
}

}  // namespace

TrackResult track_result_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("result document must be an object");
  TrackResult r;
  if (doc.contains("mode")) {
    const auto m = doc["mode"].is_string() ? mode_from_string(doc["mode"].get<std::string>())
                                           : std::nullopt;
    if (!m) throw ValidationError("result: unknown mode");
    r.mode = *m;
  }
  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array()) throw ValidationError("result: pairs must be an array");
    for (const auto& p : doc["pairs"]) {
      if (!p.is_object() || !p.contains("pre_id") || !p.contains("post_id")) {
        throw ValidationError("result: each pair needs pre_id and post_id");
      }
      MatchedPair mp{id_from_json(p["pre_id"], "result.pairs"),
                     id_from_json(p["post_id"], "result.pairs"),
                     p.value("strategy", std::string())};
      r.persistent_pre.push_back(mp.pre_id);
      r.persistent_post.push_back(mp.post_id);
      r.pairs.push_back(std::move(mp));
    }
  }
  r.removed_fix = id_list(doc, "removed_fix");
  r.removed_non_fix = id_list(doc, "removed_non_fix");
  r.newly_introduced = id_list(doc, "newly_introduced");
  if (doc.contains("fix_decisions")) {
    if (!doc["fix_decisions"].is_array()) throw ValidationError("result: fix_decisions must be an array");
    for (const auto& d : doc["fix_decisions"]) {
      if (!d.is_object() || !d.contains("id") || !d.contains("rule") || !d["rule"].is_string()) {
        throw ValidationError("result: each fix decision needs id and rule");
      }
      const auto rule = fix_rule_from_string(d["rule"].get<std::string>());
      if (!rule) throw ValidationError("result: unknown fix rule " + d["rule"].get<std::string>());
      r.fix_decisions.push_back({id_from_json(d["id"], "result.fix_decisions"), *rule});
    }
  }
  if (doc.contains("diagnostics")) {
    if (!doc["diagnostics"].is_array()) throw ValidationError("result: diagnostics must be an array");
    for (const auto& line : doc["diagnostics"]) {
      if (!line.is_string()) throw ValidationError("result: diagnostics must be strings");
      r.diagnostics.push_back(line.get<std::string>());
    }
  }
  auto by_id = [](const StableId& a, const StableId& b) { return a < b; };
  std::sort(r.persistent_pre.begin(), r.persistent_pre.end(), by_id);
  std::sort(r.persistent_post.begin(), r.persistent_post.end(), by_id);
  return r;
}

}  // namespace statictracker
