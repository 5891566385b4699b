#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "statictracker/pipeline.hpp"

namespace statictracker::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kValidationError = 3, kInternalError = 1 };

// Maps library exceptions onto exit codes: I/O, parse and configuration
// problems are input errors; data-model violations are validation errors.
int exit_code_for(const std::exception& e);

// Writes the TrackResult JSON (with an "evaluation" member when ground truth
// is given) to `out_path`, or to `out` when no path is set.
int cmd_track(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_path,
              std::ostream& out, std::ostream& err);

int cmd_evaluate(const std::filesystem::path& result_path, const std::filesystem::path& truth_path,
                 bool strict, std::ostream& out, std::ostream& err);

// Prints hunks and line map; with `with_index` also both declaration indices.
int cmd_diff(const std::filesystem::path& pre_file, const std::filesystem::path& post_file,
             bool with_index, std::ostream& out, std::ostream& err);

// Parses argv (subcommands track, evaluate, diff) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace statictracker::cli
