#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "statictracker/diff.hpp"
#include "statictracker/evaluator.hpp"
#include "statictracker/matcher.hpp"
#include "statictracker/refactoring.hpp"
#include "statictracker/snapshot.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

struct RunConfig {
  std::filesystem::path pre_report;
  std::filesystem::path post_report;
  std::filesystem::path pre_src;
  std::filesystem::path post_src;
  std::optional<std::filesystem::path> refactorings;
  std::optional<std::filesystem::path> refactoring_kinds;
  std::optional<std::filesystem::path> renames;
  std::optional<std::filesystem::path> ground_truth;
  MatcherConfig matcher;
  Detector detector = Detector::spotbugs;
  ReportFormat report_format = ReportFormat::automatic;
  std::string pre_label = "pre";
  std::string post_label = "post";
};

struct RunOutput {
  TrackResult result;
  std::optional<PrecisionReport> precision;
};

// Throws IoError naming the path when it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

// Loads every input named by `cfg`, tracks, and evaluates when ground truth
// is given. `stage`, when non-null, holds the name of the step in progress
// so a caller can report where a failure happened.
RunOutput run_track(const RunConfig& cfg, std::string* stage = nullptr);

// Parses JSON; syntax errors become ParseError with line and column.
nlohmann::json parse_json(std::string_view text, std::string_view what);

// The canonical serialisation used by the CLI: two-space indent, sorted
// keys, trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace statictracker
