#include "statictracker/evaluator.hpp"

#include "json_io.hpp"
#include "statictracker/errors.hpp"

namespace statictracker {

namespace {

constexpr std::array<EvolutionStatus, 4> kStatuses{
    EvolutionStatus::persistent, EvolutionStatus::removed_fix, EvolutionStatus::removed_non_fix,
    EvolutionStatus::newly_introduced};

constexpr std::array<EvolutionStatus, 3> kChangeStatuses{
    EvolutionStatus::removed_fix, EvolutionStatus::removed_non_fix,
    EvolutionStatus::newly_introduced};

}  // namespace

GroundTruth parse_ground_truth(std::string_view json_text) {
  const auto doc = detail::parse_json_text(json_text, "ground truth JSON");
  if (!doc.is_array()) throw ValidationError("ground truth must be an array");
  GroundTruth out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string where = "label #" + std::to_string(i + 1);
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("status") ||
        !rec["id"].is_string() || !rec["status"].is_string()) {
      throw ValidationError(where + ": needs string id and status");
    }
    const auto text = rec["id"].get<std::string>();
    const auto id = StableId::parse(text);
    if (!id) throw ValidationError(where + ": malformed id '" + text + "'");
    const auto status = status_from_string(rec["status"].get<std::string>());
    if (!status) {
      throw ValidationError(where + ": unknown status '" + rec["status"].get<std::string>() + "'");
    }
    if (!out.labels.emplace(*id, *status).second) {
      throw ValidationError(where + ": duplicate id " + text);
    }
  }
  return out;
}

void check_labels(const GroundTruth& truth, const WarningSet& pre, const WarningSet& post) {
  for (const auto& [id, status] : truth.labels) {
    if (!pre.find(id) && !post.find(id)) {
      throw ValidationError("labelled id " + id.str() + " is in neither warning set");
    }
  }
}

std::optional<double> StatusCounts::precision() const {
  if (tp + fp == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> PrecisionReport::combined_precision() const {
  if (combined_predictions == 0) return std::nullopt;
  return static_cast<double>(combined_tp) / static_cast<double>(combined_predictions);
}

PrecisionReport evaluate(const TrackResult& result, const GroundTruth& truth,
                         const EvaluateOptions& options) {
  std::map<StableId, EvolutionStatus> predicted;
  auto add = [&](const std::vector<StableId>& ids, EvolutionStatus s) {
    for (const auto& id : ids) {
      if (!predicted.emplace(id, s).second) {
        throw ValidationError("id " + id.str() + " is predicted twice in the result");
      }
    }
  };
  add(result.persistent_pre, EvolutionStatus::persistent);
  add(result.persistent_post, EvolutionStatus::persistent);
  add(result.removed_fix, EvolutionStatus::removed_fix);
  add(result.removed_non_fix, EvolutionStatus::removed_non_fix);
  add(result.newly_introduced, EvolutionStatus::newly_introduced);

  for (const auto& [id, status] : truth.labels) {
    if (!predicted.contains(id)) {
      throw ValidationError("labelled id " + id.str() + " does not appear in the result");
    }
  }

  PrecisionReport report;
  for (const auto& [id, pred] : predicted) {
    EvolutionStatus actual = EvolutionStatus::persistent;
    if (const auto it = truth.labels.find(id); it != truth.labels.end()) {
      actual = it->second;
    } else if (!options.default_persistent) {
      throw ValidationError("id " + id.str() + " has no ground-truth label");
    }
    for (const auto s : kStatuses) {
      auto& c = report.per_status[static_cast<std::size_t>(s)];
      const bool p = pred == s;
      const bool t = actual == s;
      if (p && t) ++c.tp;
      if (p && !t) ++c.fp;
      if (!p && t) ++c.fn;
      if (!p && !t) ++c.tn;
    }
  }
  for (const auto s : kChangeStatuses) {
    report.combined_tp += report[s].tp;
    report.combined_predictions += report[s].tp + report[s].fp;
  }
  return report;
}

nlohmann::json to_json(const PrecisionReport& report) {
  auto precision = [](std::optional<double> p) { return p ? nlohmann::json(*p) : nlohmann::json(); };
  nlohmann::json statuses = nlohmann::json::object();
  for (const auto s : kStatuses) {
    const auto& c = report[s];
    statuses[std::string(to_string(s))] = {{"tp", c.tp},
                                           {"fp", c.fp},
                                           {"tn", c.tn},
                                           {"fn", c.fn},
                                           {"precision", precision(c.precision())}};
  }
  return {{"statuses", statuses},
          {"combined", {{"tp", report.combined_tp},
                        {"predictions", report.combined_predictions},
                        {"precision", precision(report.combined_precision())}}}};
}

}  // namespace statictracker
