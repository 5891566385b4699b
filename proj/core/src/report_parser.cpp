// Detector report ingestion: the <WarningInstance> XML subset and the
// canonical JSON array.

#include <expat.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <memory>
#include <string>

#include "json_io.hpp"
#include "statictracker/errors.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

int parse_line_number(std::string_view text, std::string_view field, const std::string& record) {
  const auto t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ValidationError(record + ": " + std::string(field) + " '" + std::string(t) +
                          "' is not an integer");
  }
  return value;
}

// ---------------------------------------------------------------------------
// XML

enum class XmlField { warning_type, project, class_name, method, field, file_path, start, end };

constexpr std::array<std::pair<std::string_view, XmlField>, 8> kXmlFields{{
    {"WarningType", XmlField::warning_type},
    {"Project", XmlField::project},
    {"Class", XmlField::class_name},
    {"Method", XmlField::method},
    {"Field", XmlField::field},
    {"FilePath", XmlField::file_path},
    {"StartLine", XmlField::start},
    {"EndLine", XmlField::end},
}};

struct XmlRecord {
  std::array<std::optional<std::string>, 8> values;
  std::size_t line = 0;
};

struct XmlState {
  XML_Parser parser = nullptr;
  std::vector<XmlRecord> records;
  std::optional<XmlRecord> current;
  std::optional<XmlField> capturing;
  int depth_in_record = 0;
  std::string text;
  std::optional<std::string> error;
  std::size_t error_line = 0;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char**) {
  auto& st = *static_cast<XmlState*>(user);
  const std::string_view tag(name);
  if (tag == "WarningInstance") {
    if (st.current) {
      st.error = "nested <WarningInstance>";
      st.error_line = XML_GetCurrentLineNumber(st.parser);
      XML_StopParser(st.parser, XML_FALSE);
      return;
    }
    st.current.emplace();
    st.current->line = XML_GetCurrentLineNumber(st.parser);
    st.depth_in_record = 0;
    return;
  }
  if (!st.current) return;
  ++st.depth_in_record;
  if (st.depth_in_record != 1) return;
  for (const auto& [key, field] : kXmlFields) {
    if (tag == key) {
      st.capturing = field;
      st.text.clear();
      return;
    }
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<XmlState*>(user);
  const std::string_view tag(name);
  if (!st.current) return;
  if (tag == "WarningInstance" && st.depth_in_record == 0) {
    st.records.push_back(std::move(*st.current));
    st.current.reset();
    return;
  }
  if (st.depth_in_record == 1 && st.capturing) {
    st.current->values[static_cast<std::size_t>(*st.capturing)] = std::string(trim(st.text));
    st.capturing.reset();
  }
  --st.depth_in_record;
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  auto& st = *static_cast<XmlState*>(user);
  if (st.capturing && st.depth_in_record == 1) st.text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

std::vector<WarningInstance> parse_xml(std::string_view text, Detector detector) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error("cannot allocate XML parser");

  XmlState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  // A bare sequence of <WarningInstance> elements has no single root, so it
  // is wrapped. Documents with a prolog must already have one.
  const bool has_prolog = trim(text).starts_with("<?xml");
  constexpr std::string_view kOpen = "<reports>";
  constexpr std::string_view kClose = "</reports>";

  auto feed = [&](std::string_view chunk, bool final) {
    return XML_Parse(parser.get(), chunk.data(), static_cast<int>(chunk.size()),
                     final ? XML_TRUE : XML_FALSE) != XML_STATUS_ERROR;
  };
  bool ok = true;
  if (has_prolog) {
    ok = feed(text, true);
  } else {
    ok = feed(kOpen, false) && feed(text, false) && feed(kClose, true);
  }

  if (st.error) throw ParseError(*st.error, st.error_line, 0);
  if (!ok) {
    std::size_t line = XML_GetCurrentLineNumber(parser.get());
    std::size_t col = XML_GetCurrentColumnNumber(parser.get()) + 1;
    if (!has_prolog && line == 1) col = col > kOpen.size() ? col - kOpen.size() : 1;
    throw ParseError(XML_ErrorString(XML_GetErrorCode(parser.get())), line, col);
  }

  std::vector<WarningInstance> out;
  out.reserve(st.records.size());
  for (std::size_t i = 0; i < st.records.size(); ++i) {
    const auto& rec = st.records[i];
    const std::string name =
        "WarningInstance #" + std::to_string(i + 1) + " (line " + std::to_string(rec.line) + ")";
    auto get = [&](XmlField f) -> const std::optional<std::string>& {
      return rec.values[static_cast<std::size_t>(f)];
    };
    auto required = [&](XmlField f, std::string_view tag) -> const std::string& {
      const auto& v = get(f);
      if (!v) throw ValidationError(name + ": missing <" + std::string(tag) + ">");
      return *v;
    };
    WarningInstance w;
    w.detector = detector;
    w.warning_type = required(XmlField::warning_type, "WarningType");
    w.file_path = required(XmlField::file_path, "FilePath");
    w.start_line = parse_line_number(required(XmlField::start, "StartLine"), "StartLine", name);
    w.end_line = parse_line_number(required(XmlField::end, "EndLine"), "EndLine", name);
    w.project = get(XmlField::project).value_or("");
    w.class_name = get(XmlField::class_name).value_or("");
    w.method_name = get(XmlField::method).value_or("");
    w.field_name = get(XmlField::field).value_or("");
    validate(w, name);
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

const nlohmann::json* member(const nlohmann::json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    const auto it = obj.find(k);
    if (it != obj.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string string_member(const nlohmann::json& obj, std::initializer_list<const char*> keys,
                          const std::string& record, bool required) {
  const auto* v = member(obj, keys);
  if (!v) {
    if (required) throw ValidationError(record + ": missing " + std::string(*keys.begin()));
    return {};
  }
  if (!v->is_string()) {
    throw ValidationError(record + ": " + std::string(*keys.begin()) + " must be a string");
  }
  return v->get<std::string>();
}

int line_member(const nlohmann::json& obj, const char* key, const std::string& record) {
  const auto* v = member(obj, {key});
  if (!v) throw ValidationError(record + ": missing " + std::string(key));
  if (v->is_number_integer()) return v->get<int>();
  if (v->is_string()) return parse_line_number(v->get<std::string>(), key, record);
  throw ValidationError(record + ": " + std::string(key) + " must be an integer");
}

WarningSet parse_json(std::string_view text, Detector detector, const std::string& label) {
  const nlohmann::json doc = detail::parse_json_text(text, "JSON report");
  if (!doc.is_array()) throw ValidationError("JSON report must be an array of warning records");

  std::vector<WarningInstance> out;
  std::size_t with_ids = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string name = "record #" + std::to_string(i + 1);
    if (!rec.is_object()) throw ValidationError(name + ": not an object");
    WarningInstance w;
    w.detector = detector;
    if (const auto* d = member(rec, {"detector"})) {
      const auto parsed = d->is_string() ? detector_from_string(d->get<std::string>()) : std::nullopt;
      if (!parsed) throw ValidationError(name + ": unknown detector");
      w.detector = *parsed;
    }
    w.warning_type = string_member(rec, {"warning_type"}, name, true);
    w.file_path = string_member(rec, {"file_path"}, name, true);
    w.start_line = line_member(rec, "start_line", name);
    w.end_line = line_member(rec, "end_line", name);
    w.project = string_member(rec, {"project"}, name, false);
    w.class_name = string_member(rec, {"class", "class_name"}, name, false);
    w.method_name = string_member(rec, {"method", "method_name"}, name, false);
    w.field_name = string_member(rec, {"field", "field_name"}, name, false);
    const auto id_text = string_member(rec, {"stable_id"}, name, false);
    if (!id_text.empty()) {
      const auto id = StableId::parse(id_text);
      if (!id) throw ValidationError(name + ": malformed stable_id '" + id_text + "'");
      w.stable_id = *id;
      ++with_ids;
    }
    validate(w, name);
    out.push_back(std::move(w));
  }
  if (with_ids == 0) return WarningSet::with_fresh_ids(label, std::move(out));
  if (with_ids != out.size()) {
    throw ValidationError("JSON report mixes records with and without stable_id");
  }
  return WarningSet(label, std::move(out));
}

}  // namespace

WarningSet parse_report(std::string_view report_text, Detector detector,
                        const std::string& revision_label, ReportFormat format) {
  const auto body = trim(report_text);
  if (body.empty()) return WarningSet(revision_label, {});
  if (format == ReportFormat::automatic) {
    format = body.front() == '<' ? ReportFormat::xml : ReportFormat::json;
  }
  if (format == ReportFormat::json) return parse_json(report_text, detector, revision_label);
  return WarningSet::with_fresh_ids(revision_label, parse_xml(report_text, detector));
}

}  // namespace statictracker
