#include "statictracker/warning.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>

#include "statictracker/errors.hpp"

namespace statictracker {

std::string_view to_string(Detector d) {
  switch (d) {
    case Detector::spotbugs: return "spotbugs";
    case Detector::pmd: return "pmd";
  }
  return "spotbugs";
}

std::optional<Detector> detector_from_string(std::string_view s) {
  if (s == "spotbugs" || s == "findbugs") return Detector::spotbugs;
  if (s == "pmd") return Detector::pmd;
  return std::nullopt;
}

std::string_view to_string(EvolutionStatus s) {
  switch (s) {
    case EvolutionStatus::persistent: return "persistent";
    case EvolutionStatus::removed_fix: return "removed_fix";
    case EvolutionStatus::removed_non_fix: return "removed_non_fix";
    case EvolutionStatus::newly_introduced: return "newly_introduced";
  }
  return "persistent";
}

std::optional<EvolutionStatus> status_from_string(std::string_view s) {
  if (s == "persistent") return EvolutionStatus::persistent;
  if (s == "removed_fix") return EvolutionStatus::removed_fix;
  if (s == "removed_non_fix") return EvolutionStatus::removed_non_fix;
  if (s == "newly_introduced") return EvolutionStatus::newly_introduced;
  return std::nullopt;
}

std::optional<StableId> StableId::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    return std::nullopt;
  }
  const auto digits = text.substr(colon + 1);
  std::uint32_t ordinal = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ordinal);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return StableId(std::string(text.substr(0, colon)), ordinal);
}

void validate(const WarningInstance& w, std::string_view context) {
  auto fail = [&](const std::string& why) {
    throw ValidationError(std::string(context) + ": " + why);
  };
  if (w.warning_type.empty()) fail("empty WarningType");
  if (w.file_path.empty()) fail("empty FilePath");
  if (w.file_path.front() == '/' || w.file_path.front() == '\\') {
    fail("FilePath '" + w.file_path + "' is not relative");
  }
  if (w.start_line < 1) fail("StartLine " + std::to_string(w.start_line) + " is not positive");
  if (w.end_line < 1) fail("EndLine " + std::to_string(w.end_line) + " is not positive");
  if (w.start_line > w.end_line) {
    fail("StartLine " + std::to_string(w.start_line) + " exceeds EndLine " +
         std::to_string(w.end_line));
  }
}

namespace {

bool location_less(const WarningInstance& a, const WarningInstance& b) {
  return std::tie(a.file_path, a.start_line, a.end_line, a.warning_type) <
         std::tie(b.file_path, b.start_line, b.end_line, b.warning_type);
}

}  // namespace

WarningSet::WarningSet(std::string revision_label, std::vector<WarningInstance> warnings)
    : revision_label_(std::move(revision_label)), warnings_(std::move(warnings)) {
  std::sort(warnings_.begin(), warnings_.end(), [](const auto& a, const auto& b) {
    if (location_less(a, b)) return true;
    if (location_less(b, a)) return false;
    return a.stable_id < b.stable_id;
  });
  for (std::size_t i = 0; i < warnings_.size(); ++i) {
    const auto& id = warnings_[i].stable_id;
    if (id.empty()) {
      throw ValidationError("warning #" + std::to_string(i) + " has no stable_id");
    }
    if (!by_id_.emplace(id, i).second) {
      throw ValidationError("duplicate stable_id " + id.str());
    }
  }
}

WarningSet WarningSet::with_fresh_ids(std::string revision_label,
                                      std::vector<WarningInstance> warnings) {
  std::stable_sort(warnings.begin(), warnings.end(), location_less);
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    warnings[i].stable_id = StableId(revision_label, static_cast<std::uint32_t>(i + 1));
  }
  return WarningSet(std::move(revision_label), std::move(warnings));
}

const WarningInstance* WarningSet::find(const StableId& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &warnings_[it->second];
}

std::string strip_volatile_suffixes(std::string_view identifier) {
  std::string out;
  out.reserve(identifier.size());
  std::size_t i = 0;
  while (i < identifier.size()) {
    if (identifier[i] == '$' && i + 1 < identifier.size() &&
        std::isdigit(static_cast<unsigned char>(identifier[i + 1]))) {
      ++i;
      while (i < identifier.size() && std::isdigit(static_cast<unsigned char>(identifier[i]))) ++i;
      continue;
    }
    out.push_back(identifier[i++]);
  }
  return out;
}

WarningInstance normalize_volatile_identifiers(const WarningInstance& w) {
  WarningInstance out = w;
  out.class_name = strip_volatile_suffixes(w.class_name);
  out.method_name = strip_volatile_suffixes(w.method_name);
  out.field_name = strip_volatile_suffixes(w.field_name);
  return out;
}

WarningSet normalize_volatile_identifiers(const WarningSet& set) {
  std::vector<WarningInstance> out;
  out.reserve(set.size());
  for (const auto& w : set) out.push_back(normalize_volatile_identifiers(w));
  return WarningSet(set.revision_label(), std::move(out));
}

ExactKey exact_key(const WarningInstance& w) {
  return ExactKey{w.warning_type, w.file_path,  w.class_name, w.method_name,
                  w.field_name,   w.start_line, w.end_line};
}

std::size_t ExactKeyHash::operator()(const ExactKey& k) const noexcept {
  std::size_t h = std::hash<std::string>{}(k.warning_type);
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(std::hash<std::string>{}(k.file_path));
  mix(std::hash<std::string>{}(k.class_name));
  mix(std::hash<std::string>{}(k.method_name));
  mix(std::hash<std::string>{}(k.field_name));
  mix(static_cast<std::size_t>(k.start_line));
  mix(static_cast<std::size_t>(k.end_line));
  return h;
}

nlohmann::json to_json(const WarningInstance& w) {
  return nlohmann::json{
      {"detector", std::string(to_string(w.detector))},
      {"warning_type", w.warning_type},
      {"project", w.project},
      {"class", w.class_name},
      {"method", w.method_name},
      {"field", w.field_name},
      {"file_path", w.file_path},
      {"start_line", w.start_line},
      {"end_line", w.end_line},
      {"stable_id", w.stable_id.str()},
  };
}

nlohmann::json to_json(const WarningSet& set) {
  auto arr = nlohmann::json::array();
  for (const auto& w : set) arr.push_back(to_json(w));
  return arr;
}

}  // namespace statictracker
