#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <string>

#include "statictracker/decl_index.hpp"
#include "statictracker/errors.hpp"
#include "statictracker/parallel.hpp"

namespace statictracker::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ConfigError*>(&e)) {
    return kInputError;
  }
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ConflictError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e)) {
    return kValidationError;
  }
  return kInternalError;
}

namespace {

void write_output(const std::string& text, const std::optional<std::filesystem::path>& path,
                  std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path->string());
  file << text;
  if (!file) throw IoError("write error in " + path->string());
}

int report(const std::string& stage, const std::exception& e, std::ostream& err) {
  err << "statictracker: " << stage << ": " << e.what() << "\n";
  return exit_code_for(e);
}

}  // namespace

int cmd_track(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_path,
              std::ostream& out, std::ostream& err) {
  std::string stage = "config";
  try {
    const RunOutput run = run_track(cfg, &stage);
    nlohmann::json doc = to_json(run.result);
    if (run.precision) doc["evaluation"] = to_json(*run.precision);
    stage = "output";
    write_output(dump_json(doc), out_path, out);
    return kOk;
  } catch (const std::exception& e) {
    return report(stage, e, err);
  }
}

int cmd_evaluate(const std::filesystem::path& result_path, const std::filesystem::path& truth_path,
                 bool strict, std::ostream& out, std::ostream& err) {
  std::string stage = "result";
  try {
    const TrackResult result =
        track_result_from_json(parse_json(read_text_file(result_path), "result JSON"));
    stage = "ground-truth";
    const GroundTruth truth = parse_ground_truth(read_text_file(truth_path));
    stage = "evaluate";
    EvaluateOptions options;
    options.default_persistent = !strict;
    out << dump_json(to_json(evaluate(result, truth, options)));
    return kOk;
  } catch (const std::exception& e) {
    return report(stage, e, err);
  }
}

int cmd_diff(const std::filesystem::path& pre_file, const std::filesystem::path& post_file,
             bool with_index, std::ostream& out, std::ostream& err) {
  try {
    const std::string pre = read_text_file(pre_file);
    const std::string post = read_text_file(post_file);
    const std::string pre_name = pre_file.filename().generic_string();
    const std::string post_name = post_file.filename().generic_string();
    nlohmann::json doc = to_json(compute_diff(pre, post, pre_name, post_name));
    if (with_index) {
      doc["pre_index"] = to_json(build_decl_index(pre, pre_file.generic_string()));
      doc["post_index"] = to_json(build_decl_index(post, post_file.generic_string()));
    }
    out << dump_json(doc);
    return kOk;
  } catch (const std::exception& e) {
    return report("diff", e, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Track static-analysis warnings across a commit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<std::filesystem::path> out_path;
  std::string mode = "statictracker";
  std::string detector = "spotbugs";
  std::optional<unsigned> jobs;
  auto* track = app.add_subcommand("track", "Match pre- and post-commit warnings");
  track->add_option("--mode", mode, "sota or statictracker")
      ->check(CLI::IsMember({"sota", "statictracker"}));
  track->add_option("--pre-report", cfg.pre_report, "Pre-commit detector report")->required();
  track->add_option("--post-report", cfg.post_report, "Post-commit detector report")->required();
  track->add_option("--pre-src", cfg.pre_src, "Pre-commit source root")->required();
  track->add_option("--post-src", cfg.post_src, "Post-commit source root")->required();
  track->add_option("--refactorings", cfg.refactorings, "Refactoring records (JSON)");
  track->add_option("--refactoring-kinds", cfg.refactoring_kinds,
                    "Extra refactoring kinds (JSON object kind -> scope)");
  track->add_option("--renames", cfg.renames, "File renames (JSON)");
  track->add_option("--ground-truth", cfg.ground_truth, "Labels to evaluate against (JSON)");
  track->add_option("--out", out_path, "Output file (default: stdout)");
  track->add_option("--location-threshold", cfg.matcher.location_threshold,
                    "Largest accepted offset difference")
      ->capture_default_str();
  track->add_option("--hash-top-n", cfg.matcher.hash_top_n, "Leading tokens hashed (SOTA)")
      ->capture_default_str();
  track->add_option("--jobs", jobs, "Worker threads (default: available parallelism)");
  track->add_option("--detector", detector, "spotbugs or pmd")
      ->check(CLI::IsMember({"spotbugs", "findbugs", "pmd"}));
  track->add_option("--pre-label", cfg.pre_label, "Stable-id label of pre warnings")
      ->capture_default_str();
  track->add_option("--post-label", cfg.post_label, "Stable-id label of post warnings")
      ->capture_default_str();

  std::filesystem::path result_path, truth_path;
  bool strict = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score a track result against labels");
  evaluate->add_option("--result", result_path, "Track result JSON")->required();
  evaluate->add_option("--ground-truth", truth_path, "Labels JSON")->required();
  evaluate->add_flag("--strict", strict, "Reject result ids without a label");

  std::filesystem::path pre_file, post_file;
  bool with_index = false;
  auto* diff = app.add_subcommand("diff", "Show the line diff of two files");
  diff->add_option("pre", pre_file, "Pre-commit file")->required();
  diff->add_option("post", post_file, "Post-commit file")->required();
  diff->add_flag("--decl-index", with_index, "Also dump both declaration indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (track->parsed()) {
    cfg.matcher.mode = *mode_from_string(mode);
    cfg.matcher.jobs = jobs.value_or(default_jobs());
    cfg.detector = *detector_from_string(detector);
    return cmd_track(cfg, out_path, out, err);
  }
  if (evaluate->parsed()) return cmd_evaluate(result_path, truth_path, strict, out, err);
  return cmd_diff(pre_file, post_file, with_index, out, err);
}

}  // namespace statictracker::cli
