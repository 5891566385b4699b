#include "statictracker/refactoring.hpp"

#include <algorithm>
#include <array>

#include "json_io.hpp"
#include "statictracker/errors.hpp"

namespace statictracker {

std::string_view to_string(RefactoringScope s) {
  switch (s) {
    case RefactoringScope::class_level: return "class_level";
    case RefactoringScope::class_member: return "class_member";
    case RefactoringScope::method: return "method";
    case RefactoringScope::method_fragment: return "method_fragment";
    case RefactoringScope::field: return "field";
    case RefactoringScope::variable: return "variable";
    case RefactoringScope::path_prefix: return "path_prefix";
    case RefactoringScope::inert: return "inert";
  }
  return "inert";
}

const std::map<std::string, RefactoringScope, std::less<>>& builtin_refactoring_kinds() {
  using S = RefactoringScope;
  static const std::map<std::string, RefactoringScope, std::less<>> kinds{
      {"RenameClass", S::class_level},
      {"MoveClass", S::class_level},
      {"MoveAndRenameClass", S::class_level},
      {"RenameMethod", S::method},
      {"MoveMethod", S::method},
      {"PullUpMethod", S::method},
      {"PushDownMethod", S::method},
      {"ExtractMethod", S::method_fragment},
      {"InlineMethod", S::method},
      {"RenameField", S::field},
      {"MoveField", S::field},
      {"PullUpField", S::field},
      {"PushDownField", S::field},
      {"RenameVariable", S::variable},
      {"RenameParameter", S::variable},
      {"ExtractClass", S::class_member},
      {"ExtractSuperclass", S::class_member},
      {"ExtractInterface", S::class_member},
      {"RenamePackage", S::path_prefix},
      {"MoveSourceFolder", S::path_prefix},
      {"ChangeMethodSignature", S::method},
      {"ExtractAndMoveMethod", S::method_fragment},
  };
  return kinds;
}

namespace {

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key,
                                           const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError(where + ": " + key + " must be a string");
  return it->get<std::string>();
}

Locator parse_locator(const nlohmann::json& obj, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  Locator loc;
  loc.file_path = optional_string(obj, "file_path", where).value_or("");
  if (loc.file_path.empty()) throw ValidationError(where + ": file_path is required");
  loc.class_name = optional_string(obj, "class_name", where).value_or("");
  loc.method_name = optional_string(obj, "method_name", where);
  loc.field_name = optional_string(obj, "field_name", where);
  const bool has_start = obj.contains("start_line") && !obj["start_line"].is_null();
  const bool has_end = obj.contains("end_line") && !obj["end_line"].is_null();
  if (has_start != has_end) throw ValidationError(where + ": start_line and end_line go together");
  if (has_start) {
    if (!obj["start_line"].is_number_integer() || !obj["end_line"].is_number_integer()) {
      throw ValidationError(where + ": start_line/end_line must be integers");
    }
    LineRange r{obj["start_line"].get<int>(), obj["end_line"].get<int>()};
    if (r.start < 1 || r.start > r.end) throw ValidationError(where + ": invalid line range");
    loc.lines = r;
  }
  return loc;
}

std::string describe(const RefactoringRecord& r) {
  std::string s = "#" + std::to_string(r.index + 1) + " " + r.kind + " (" + r.before.class_name;
  if (r.before.method_name) s += "." + *r.before.method_name;
  if (r.before.field_name) s += "#" + *r.before.field_name;
  return s + ")";
}

bool has_prefix(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

// `name` is `cls` itself or a class nested in it ("Outer$Inner", "Outer.Inner").
bool class_or_inner(std::string_view name, std::string_view cls) {
  if (cls.empty()) return false;
  if (name == cls) return true;
  return has_prefix(name, cls) && (name[cls.size()] == '$' || name[cls.size()] == '.');
}

// Path (or dotted package) `s` lies under `prefix`.
bool under(std::string_view s, std::string_view prefix, char sep) {
  if (prefix.empty()) return false;
  if (s == prefix) return true;
  if (prefix.back() == sep) return has_prefix(s, prefix);
  return has_prefix(s, prefix) && s[prefix.size()] == sep;
}

std::string replace_prefix(const std::string& s, const std::string& from, const std::string& to) {
  return to + s.substr(from.size());
}

bool same_class(const Locator& before, const WarningInstance& w) {
  return before.class_name.empty() || class_or_inner(w.class_name, before.class_name);
}

bool lines_inside(const Locator& loc, const WarningInstance& w) {
  return loc.lines && loc.lines->contains(LineRange{w.start_line, w.end_line});
}

enum Slot { kFile, kClass, kMethod, kField, kSlots };

struct Proposal {
  std::array<std::optional<std::string>, kSlots> values;
};

void propose(Proposal& p, Slot slot, const std::string& before, const std::string& after) {
  if (before != after) p.values[slot] = after;
}

Proposal proposal_for(const RefactoringRecord& r, const WarningInstance& w) {
  Proposal p;
  const auto& b = r.before;
  const auto& a = r.after;
  propose(p, kFile, w.file_path, b.file_path == a.file_path ? w.file_path : a.file_path);
  switch (r.scope) {
    case RefactoringScope::class_level:
      if (!b.class_name.empty() && !a.class_name.empty()) {
        propose(p, kClass, w.class_name, replace_prefix(w.class_name, b.class_name, a.class_name));
      }
      break;
    case RefactoringScope::class_member:
    case RefactoringScope::method:
    case RefactoringScope::method_fragment:
    case RefactoringScope::field:
      if (!a.class_name.empty() && a.class_name != b.class_name) {
        propose(p, kClass, w.class_name, a.class_name);
      }
      if (b.method_name && a.method_name) propose(p, kMethod, *b.method_name, *a.method_name);
      if (b.field_name && a.field_name) propose(p, kField, *b.field_name, *a.field_name);
      break;
    case RefactoringScope::variable:
      if (b.field_name && a.field_name) propose(p, kField, *b.field_name, *a.field_name);
      break;
    case RefactoringScope::path_prefix:
      p.values[kFile].reset();
      if (under(w.file_path, b.file_path, '/')) {
        propose(p, kFile, b.file_path, a.file_path);
        if (p.values[kFile]) p.values[kFile] = replace_prefix(w.file_path, b.file_path, a.file_path);
      }
      if (!b.class_name.empty() && under(w.class_name, b.class_name, '.')) {
        propose(p, kClass, b.class_name, a.class_name);
        if (p.values[kClass]) {
          p.values[kClass] = replace_prefix(w.class_name, b.class_name, a.class_name);
        }
      }
      break;
    case RefactoringScope::inert:
      break;
  }
  return p;
}

}  // namespace

RefactoringSet parse_refactorings(std::string_view json_text, const RefactoringOptions& options) {
  const auto doc = detail::parse_json_text(json_text, "refactorings JSON");
  if (!doc.is_array()) throw ValidationError("refactorings document must be an array");
  std::vector<RefactoringRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string where = "refactoring #" + std::to_string(i + 1);
    if (!rec.is_object()) throw ValidationError(where + ": not an object");
    RefactoringRecord r;
    r.index = i;
    r.kind = optional_string(rec, "kind", where).value_or("");
    if (r.kind.empty()) throw ValidationError(where + ": kind is required");
    if (!rec.contains("before") || !rec.contains("after")) {
      throw ValidationError(where + " (" + r.kind + "): missing before/after");
    }
    r.before = parse_locator(rec["before"], where + ".before");
    r.after = parse_locator(rec["after"], where + ".after");
    if (r.before == r.after) throw ValidationError(where + " (" + r.kind + "): before equals after");
    const auto& builtin = builtin_refactoring_kinds();
    if (auto it = builtin.find(r.kind); it != builtin.end()) {
      r.scope = it->second;
    } else if (auto ex = options.extra_kinds.find(r.kind); ex != options.extra_kinds.end()) {
      r.scope = ex->second;
    }
    out.push_back(std::move(r));
  }
  return RefactoringSet(std::move(out));
}

RefactoringOptions parse_refactoring_options(std::string_view json_text) {
  const auto doc = detail::parse_json_text(json_text, "refactoring kinds JSON");
  if (!doc.is_object()) throw ValidationError("refactoring kinds config must be an object");
  static constexpr std::array<RefactoringScope, 8> kScopes{
      RefactoringScope::class_level, RefactoringScope::class_member,
      RefactoringScope::method,      RefactoringScope::method_fragment,
      RefactoringScope::field,       RefactoringScope::variable,
      RefactoringScope::path_prefix, RefactoringScope::inert};
  RefactoringOptions out;
  for (const auto& [kind, value] : doc.items()) {
    if (!value.is_string()) throw ConfigError("refactoring kind " + kind + ": scope must be a string");
    const auto name = value.get<std::string>();
    const auto it = std::find_if(kScopes.begin(), kScopes.end(),
                                 [&](RefactoringScope s) { return to_string(s) == name; });
    if (it == kScopes.end()) throw ConfigError("refactoring kind " + kind + ": unknown scope " + name);
    out.extra_kinds[kind] = *it;
  }
  return out;
}

bool applies_to(const RefactoringRecord& r, const WarningInstance& w) {
  const auto& b = r.before;
  switch (r.scope) {
    case RefactoringScope::inert:
      return false;
    case RefactoringScope::path_prefix:
      return under(w.file_path, b.file_path, '/') ||
             (!b.class_name.empty() && under(w.class_name, b.class_name, '.'));
    default:
      break;
  }
  if (w.file_path != b.file_path) return false;
  switch (r.scope) {
    case RefactoringScope::class_level:
      return class_or_inner(w.class_name, b.class_name);
    case RefactoringScope::class_member:
      if (w.class_name != b.class_name) return false;
      if (b.method_name) return w.method_name == *b.method_name;
      if (b.field_name) return w.field_name == *b.field_name;
      return false;
    case RefactoringScope::method:
      return b.method_name && w.class_name == b.class_name && w.method_name == *b.method_name;
    case RefactoringScope::method_fragment:
      return w.class_name == b.class_name && lines_inside(b, w) &&
             (!b.method_name || w.method_name == *b.method_name);
    case RefactoringScope::field:
      return b.field_name && w.class_name == b.class_name && w.field_name == *b.field_name;
    case RefactoringScope::variable:
      return b.field_name && !w.field_name.empty() && w.field_name == *b.field_name &&
             same_class(b, w) && (!b.method_name || w.method_name == *b.method_name);
    default:
      return false;
  }
}

WarningInstance rewrite_metadata(const WarningInstance& w, const RefactoringSet& refs) {
  static constexpr std::array<const char*, kSlots> kSlotNames{"file_path", "class", "method",
                                                              "field"};
  std::array<std::optional<std::string>, kSlots> chosen;
  std::array<const RefactoringRecord*, kSlots> chosen_by{};
  for (const auto& r : refs.records()) {
    if (!applies_to(r, w)) continue;
    const auto p = proposal_for(r, w);
    for (int s = 0; s < kSlots; ++s) {
      if (!p.values[s]) continue;
      if (chosen[s] && *chosen[s] != *p.values[s]) {
        throw ConflictError("refactorings " + describe(*chosen_by[s]) + " and " + describe(r) +
                            " rewrite " + kSlotNames[s] + " of warning " + w.stable_id.str() +
                            " to '" + *chosen[s] + "' and '" + *p.values[s] + "'");
      }
      chosen[s] = p.values[s];
      chosen_by[s] = &r;
    }
  }
  WarningInstance out = w;
  if (chosen[kFile]) out.file_path = *chosen[kFile];
  if (chosen[kClass]) out.class_name = *chosen[kClass];
  if (chosen[kMethod]) out.method_name = *chosen[kMethod];
  if (chosen[kField]) out.field_name = *chosen[kField];
  return out;
}

RenameMap renames_from_refactorings(const RefactoringSet& refs) {
  RenameMap out;
  for (const auto& r : refs.records()) {
    if (r.scope != RefactoringScope::class_level) continue;
    if (r.before.file_path != r.after.file_path) out.emplace(r.before.file_path, r.after.file_path);
  }
  return out;
}

}  // namespace statictracker
