#include "statictracker/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "statictracker/errors.hpp"

namespace statictracker {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read error in " + path.string());
  return buf.str();
}

nlohmann::json parse_json(std::string_view text, std::string_view what) {
  return detail::parse_json_text(text, what);
}

std::string dump_json(const nlohmann::json& doc) { return detail::dump_canonical(doc); }

RunOutput run_track(const RunConfig& cfg, std::string* stage) {
  auto enter = [stage](const char* name) {
    if (stage) *stage = name;
  };
  enter("config");
  validate(cfg.matcher);

  enter("snapshot");
  Snapshot pre_snap = load_snapshot(cfg.pre_src, cfg.pre_label);
  Snapshot post_snap = load_snapshot(cfg.post_src, cfg.post_label);

  enter("report");
  const WarningSet pre = parse_report(read_text_file(cfg.pre_report), cfg.detector, cfg.pre_label,
                                      cfg.report_format);
  const WarningSet post = parse_report(read_text_file(cfg.post_report), cfg.detector,
                                       cfg.post_label, cfg.report_format);

  enter("refactorings");
  RefactoringOptions ref_options;
  if (cfg.refactoring_kinds) {
    ref_options = parse_refactoring_options(read_text_file(*cfg.refactoring_kinds));
  }
  RefactoringSet refs;
  if (cfg.refactorings) refs = parse_refactorings(read_text_file(*cfg.refactorings), ref_options);

  enter("renames");
  RenameMap renames;
  if (cfg.renames) renames = parse_renames(read_text_file(*cfg.renames));
  std::set<std::string> targets;
  for (const auto& [from, to] : renames) targets.insert(to);
  for (const auto& [from, to] : renames_from_refactorings(refs)) {
    if (!renames.contains(from) && !targets.contains(to)) {
      renames.emplace(from, to);
      targets.insert(to);
    }
  }
  const RevisionPair pair =
      compute_revision_pair(std::move(pre_snap), std::move(post_snap), std::move(renames));

  enter("diff");
  const DiffSet diffs = compute_diffs(pair, cfg.matcher.jobs);

  enter("match");
  RunOutput out;
  out.result = track(pre, post, pair, diffs, refs, cfg.matcher);

  if (cfg.ground_truth) {
    enter("evaluate");
    const GroundTruth truth = parse_ground_truth(read_text_file(*cfg.ground_truth));
    check_labels(truth, pre, post);
    out.precision = evaluate(out.result, truth);
  }
  enter("done");
  return out;
}

}  // namespace statictracker
