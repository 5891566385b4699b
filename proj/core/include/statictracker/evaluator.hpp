#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "statictracker/matcher.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

struct GroundTruth {
  std::map<StableId, EvolutionStatus> labels;
};

// Parses [{"id": "...", "status": "..."}]. Duplicate ids are a
// ValidationError.
GroundTruth parse_ground_truth(std::string_view json_text);

// Throws ValidationError naming the first label whose id is in neither set.
void check_labels(const GroundTruth& truth, const WarningSet& pre, const WarningSet& post);

struct StatusCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  // tp / (tp + fp); nullopt when nothing was predicted with this status.
  std::optional<double> precision() const;
};

struct PrecisionReport {
  std::array<StatusCounts, 4> per_status;  // indexed by EvolutionStatus
  std::size_t combined_tp = 0;
  std::size_t combined_predictions = 0;

  const StatusCounts& operator[](EvolutionStatus s) const {
    return per_status[static_cast<std::size_t>(s)];
  }
  // Over removed_fix, removed_non_fix and newly_introduced.
  std::optional<double> combined_precision() const;
};

struct EvaluateOptions {
  // Ids in the result without a label count as truly persistent.
  bool default_persistent = true;
};

// Every truth id must appear among the result's predictions; otherwise a
// ValidationError names it.
PrecisionReport evaluate(const TrackResult& result, const GroundTruth& truth,
                         const EvaluateOptions& options = {});

nlohmann::json to_json(const PrecisionReport& report);

}  // namespace statictracker
