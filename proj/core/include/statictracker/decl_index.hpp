#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "statictracker/diff.hpp"
#include "statictracker/warning.hpp"

namespace statictracker {

enum class DeclKind { class_decl, method, field };

std::string_view to_string(DeclKind k);

struct Decl {
  std::string name;
  DeclKind kind = DeclKind::class_decl;
  int start_line = 1;
  int end_line = 1;
  int declaration_line = 1;  // line holding the declared name
  std::optional<std::size_t> enclosing;  // index into DeclIndex::classes
  int depth = 0;                         // brace nesting of the declaration

  LineRange range() const noexcept { return {start_line, end_line}; }
  friend bool operator==(const Decl&, const Decl&) = default;
};

// Class, method and field extents of one source file, recovered by a
// brace-balancing scan. Regions the scan cannot bracket are left out.
struct DeclIndex {
  std::string file_path;
  int line_count = 0;
  std::vector<Decl> classes;
  std::vector<Decl> methods;
  std::vector<Decl> fields;
};

// Java by default; paths ending in ".scala" also recognise object/trait,
// `def` and newline-terminated `val`/`var`.
DeclIndex build_decl_index(std::string_view text, const std::string& file_path);

struct WarningContext {
  std::optional<Decl> cls;
  std::optional<Decl> mth;
  std::optional<Decl> field;
};

WarningContext locate_context(const WarningInstance& w, const DeclIndex& index);

nlohmann::json to_json(const DeclIndex& index);

}  // namespace statictracker
