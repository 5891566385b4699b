#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

namespace statictracker {

enum class Detector { spotbugs, pmd };

std::string_view to_string(Detector d);
std::optional<Detector> detector_from_string(std::string_view s);

enum class EvolutionStatus { persistent, removed_fix, removed_non_fix, newly_introduced };

std::string_view to_string(EvolutionStatus s);
std::optional<EvolutionStatus> status_from_string(std::string_view s);

// Identifier of a warning within one revision, rendered "<label>:<ordinal>".
// Ordering is (label, ordinal) so "pre:2" sorts before "pre:10".
class StableId {
 public:
  StableId() = default;
  StableId(std::string label, std::uint32_t ordinal)
      : label_(std::move(label)), ordinal_(ordinal) {}

  // Accepts "<label>:<digits>"; the label may itself contain ':'.
  static std::optional<StableId> parse(std::string_view text);

  const std::string& label() const noexcept { return label_; }
  std::uint32_t ordinal() const noexcept { return ordinal_; }
  std::string str() const { return label_ + ":" + std::to_string(ordinal_); }
  bool empty() const noexcept { return label_.empty(); }

  friend bool operator==(const StableId&, const StableId&) = default;
  friend std::strong_ordering operator<=>(const StableId& a, const StableId& b) {
    if (auto c = a.label_ <=> b.label_; c != 0) return c;
    return a.ordinal_ <=> b.ordinal_;
  }

 private:
  std::string label_;
  std::uint32_t ordinal_ = 0;
};

// One detector finding, in the shape of the simplified Spotbugs/PMD record:
// type, project, class/method/field names and a 1-based inclusive line range.
struct WarningInstance {
  Detector detector = Detector::spotbugs;
  std::string warning_type;
  std::string project;
  std::string class_name;
  std::string method_name;
  std::string field_name;
  std::string file_path;
  int start_line = 1;
  int end_line = 1;
  StableId stable_id;

  friend bool operator==(const WarningInstance&, const WarningInstance&) = default;
};

// Throws ValidationError when the line range or path is malformed. `context`
// names the record in the message.
void validate(const WarningInstance& w, std::string_view context);

// The warnings of one revision, kept in the canonical order
// (file_path, start_line, end_line, warning_type, stable_id).
class WarningSet {
 public:
  WarningSet() = default;

  // Keeps the stable ids already present; they must be non-empty and unique.
  WarningSet(std::string revision_label, std::vector<WarningInstance> warnings);

  // Sorts by location (input order breaks ties) and assigns
  // "<revision_label>:<ordinal>" ids in the resulting order.
  static WarningSet with_fresh_ids(std::string revision_label,
                                   std::vector<WarningInstance> warnings);

  const std::string& revision_label() const noexcept { return revision_label_; }
  std::span<const WarningInstance> warnings() const noexcept { return warnings_; }
  std::size_t size() const noexcept { return warnings_.size(); }
  bool empty() const noexcept { return warnings_.empty(); }
  auto begin() const noexcept { return warnings_.begin(); }
  auto end() const noexcept { return warnings_.end(); }

  const WarningInstance* find(const StableId& id) const;

  friend bool operator==(const WarningSet& a, const WarningSet& b) {
    return a.revision_label_ == b.revision_label_ && a.warnings_ == b.warnings_;
  }

 private:
  std::string revision_label_;
  std::vector<WarningInstance> warnings_;
  std::map<StableId, std::size_t> by_id_;
};

// Deletes every "$<digits>" run from a compiler-generated identifier:
// "opts$4" -> "opts", "AclCommand$$anonfun$2" -> "AclCommand$$anonfun".
std::string strip_volatile_suffixes(std::string_view identifier);

// Applies strip_volatile_suffixes to class, method and field names only.
WarningInstance normalize_volatile_identifiers(const WarningInstance& w);
WarningSet normalize_volatile_identifiers(const WarningSet& set);

struct ExactKey {
  std::string warning_type;
  std::string file_path;
  std::string class_name;
  std::string method_name;
  std::string field_name;
  int start_line = 0;
  int end_line = 0;

  friend bool operator==(const ExactKey&, const ExactKey&) = default;
  friend auto operator<=>(const ExactKey&, const ExactKey&) = default;
};

ExactKey exact_key(const WarningInstance& w);

struct ExactKeyHash {
  std::size_t operator()(const ExactKey& k) const noexcept;
};

enum class ReportFormat { automatic, xml, json };

// Parses a detector report: either <WarningInstance> elements (anywhere in
// the document) or the canonical JSON array. Records without a stable_id get
// fresh ids; a JSON report whose records all carry ids keeps them.
WarningSet parse_report(std::string_view report_text, Detector detector,
                        const std::string& revision_label,
                        ReportFormat format = ReportFormat::automatic);

// Canonical JSON: an array of records with snake_case keys.
nlohmann::json to_json(const WarningSet& set);
nlohmann::json to_json(const WarningInstance& w);

}  // namespace statictracker

template <>
struct std::hash<statictracker::StableId> {
  std::size_t operator()(const statictracker::StableId& id) const noexcept {
    return std::hash<std::string>{}(id.label()) * 31u + id.ordinal();
  }
};
