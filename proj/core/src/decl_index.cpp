#include "statictracker/decl_index.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

namespace statictracker {

std::string_view to_string(DeclKind k) {
  switch (k) {
    case DeclKind::class_decl: return "class";
    case DeclKind::method: return "method";
    case DeclKind::field: return "field";
  }
  return "class";
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Blanks comments, string and char literals (newlines survive), so braces
// and semicolons inside them do not count.
std::string mask_literals(std::string_view src) {
  std::string out(src);
  const std::size_t n = src.size();
  auto blank = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < n; ++k) {
      if (out[k] != '\n') out[k] = ' ';
    }
  };
  std::size_t i = 0;
  while (i < n) {
    const char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      const auto e = src.find('\n', i);
      const auto end = e == std::string_view::npos ? n : e;
      blank(i, end);
      i = end;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const auto e = src.find("*/", i + 2);
      const auto end = e == std::string_view::npos ? n : e + 2;
      blank(i, end);
      i = end;
    } else if (c == '"' && src.substr(i, 3) == "\"\"\"") {
      const auto e = src.find("\"\"\"", i + 3);
      const auto end = e == std::string_view::npos ? n : e + 3;
      blank(i + 1, end - 1);
      i = end;
    } else if (c == '"') {
      std::size_t k = i + 1;
      while (k < n && src[k] != '"' && src[k] != '\n') k += (src[k] == '\\') ? 2 : 1;
      const auto end = std::min(k + 1, n);
      blank(i + 1, end - 1);
      i = end;
    } else if (c == '\'') {
      // Char literal: 'x' or an escape; otherwise (Scala symbols) leave it.
      std::size_t k = i + 1;
      if (k < n && src[k] == '\\') {
        k += 2;
        while (k < n && src[k] != '\'' && src[k] != '\n' && k < i + 10) ++k;
      } else {
        ++k;
      }
      if (k < n && src[k] == '\'') {
        blank(i + 1, k);
        i = k + 1;
      } else {
        ++i;
      }
    } else {
      ++i;
    }
  }
  return out;
}

// Annotations are blanked so their arguments do not look like signatures.
std::string mask_annotations(const std::string& header) {
  std::string out = header;
  const std::size_t n = out.size();
  std::size_t i = 0;
  while (i < n) {
    if (out[i] != '@') {
      ++i;
      continue;
    }
    if (out.compare(i + 1, 9, "interface") == 0) {
      out[i] = ' ';
      i += 10;
      continue;
    }
    std::size_t k = i + 1;
    while (k < n && (is_ident_char(out[k]) || out[k] == '.')) ++k;
    std::size_t look = k;
    while (look < n && std::isspace(static_cast<unsigned char>(out[look]))) ++look;
    if (look < n && out[look] == '(') {
      int depth = 0;
      for (k = look; k < n; ++k) {
        if (out[k] == '(') ++depth;
        if (out[k] == ')' && --depth == 0) {
          ++k;
          break;
        }
      }
    }
    for (std::size_t j = i; j < k && j < n; ++j) out[j] = ' ';
    i = k;
  }
  return out;
}

constexpr std::array<std::string_view, 17> kNotMethodNames{
    "if",    "for",  "while", "switch", "catch", "synchronized", "return", "new",   "try",
    "do",    "else", "throw", "super",  "this",  "assert",       "case",   "finally"};

bool is_keyword(std::string_view name) {
  return std::find(kNotMethodNames.begin(), kNotMethodNames.end(), name) != kNotMethodNames.end();
}

// Index of the first '=' outside parentheses/brackets/generics that is not
// part of ==, <=, >=, !=, =>.
std::size_t top_level_assign(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c != '=' || depth != 0) continue;
    const char prev = i > 0 ? s[i - 1] : ' ';
    const char next = i + 1 < s.size() ? s[i + 1] : ' ';
    if (next == '=' || next == '>' || prev == '=' || prev == '!' || prev == '<' || prev == '>') {
      continue;
    }
    return i;
  }
  return std::string::npos;
}

struct Header {
  std::string text;
  std::vector<int> lines;
  int paren_depth = 0;

  void push(char c, int line) {
    text.push_back(c);
    lines.push_back(line);
    if (c == '(') ++paren_depth;
    if (c == ')' && paren_depth > 0) --paren_depth;
  }
  void clear() {
    text.clear();
    lines.clear();
    paren_depth = 0;
  }
  bool blank() const {
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  }
  int first_line() const {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) return lines[i];
    }
    return lines.empty() ? 1 : lines.back();
  }
};

enum class ScopeKind { file, class_body, method_body, inline_block, block };

struct Scope {
  ScopeKind kind = ScopeKind::file;
  std::optional<std::size_t> decl;  // index into Scanner::decls
  Header header;
};

struct PendingDecl {
  Decl decl;
  std::optional<std::size_t> enclosing;  // index into Scanner::decls
  bool closed = false;
};

const std::regex& class_re() {
  static const std::regex re(R"((?:^|[\s])(class|interface|enum|record)\s+([A-Za-z_$][\w$]*))");
  return re;
}
const std::regex& scala_class_re() {
  static const std::regex re(R"((?:^|[\s])(class|object|trait)\s+([A-Za-z_$][\w$]*))");
  return re;
}
const std::regex& method_re() {
  static const std::regex re(R"(^\s*(?:[\w$<>\[\]?,.&\s]*?\s)?([A-Za-z_$][\w$]*)\s*\()");
  return re;
}
const std::regex& scala_def_re() {
  static const std::regex re(R"((?:^|\s)def\s+([A-Za-z_$][\w$]*))");
  return re;
}
const std::regex& scala_val_re() {
  static const std::regex re(
      R"(^\s*(?:(?:private|protected|override|final|lazy|implicit)(?:\[[\w.]*\])?\s+)*(?:val|var)\s+([A-Za-z_$][\w$]*))");
  return re;
}

class Scanner {
 public:
  Scanner(std::string_view text, bool scala) : src_(mask_literals(text)), scala_(scala) {}

  DeclIndex run(const std::string& file_path) {
    stack_.push_back(Scope{});
    int line = 1;
    for (const char c : src_) {
      switch (c) {
        case '\n':
          if (scala_) scala_line_end(line);
          header().push(' ', line);
          ++line;
          break;
        case '{':
          open_brace(line);
          break;
        case '}':
          close_brace(line);
          break;
        case ';':
          if (header().paren_depth > 0) {
            header().push(c, line);
          } else {
            end_statement(line);
          }
          break;
        default:
          header().push(c, line);
      }
    }
    return finish(file_path, line);
  }

 private:
  Header& header() { return stack_.back().header; }
  ScopeKind kind() const { return stack_.back().kind; }

  std::optional<std::size_t> enclosing_class() const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (it->kind == ScopeKind::class_body) return it->decl;
    }
    return std::nullopt;
  }

  std::size_t add_decl(DeclKind k, std::string name, int start, int decl_line) {
    PendingDecl p;
    p.decl.name = std::move(name);
    p.decl.kind = k;
    p.decl.start_line = std::min(start, decl_line);
    p.decl.end_line = decl_line;
    p.decl.declaration_line = decl_line;
    p.decl.depth = static_cast<int>(stack_.size()) - 1;
    p.enclosing = enclosing_class();
    decls_.push_back(std::move(p));
    return decls_.size() - 1;
  }

  bool try_class(const Header& h, const std::string& masked, std::size_t& decl) {
    std::smatch m;
    if (!std::regex_search(masked, m, scala_ ? scala_class_re() : class_re())) {
      if (!scala_ || !std::regex_search(masked, m, class_re())) return false;
    }
    const auto pos = static_cast<std::size_t>(m.position(2));
    decl = add_decl(DeclKind::class_decl, m.str(2), h.first_line(), h.lines[pos]);
    return true;
  }

  bool try_method(const Header& h, const std::string& masked, std::size_t& decl) {
    std::smatch m;
    if (scala_ && std::regex_search(masked, m, scala_def_re())) {
      const auto pos = static_cast<std::size_t>(m.position(1));
      decl = add_decl(DeclKind::method, m.str(1), h.first_line(), h.lines[pos]);
      return true;
    }
    if (!std::regex_search(masked, m, method_re())) return false;
    const auto name = m.str(1);
    if (is_keyword(name)) return false;
    const auto paren = static_cast<std::size_t>(m.position(0) + m.length(0) - 1);
    const auto assign = top_level_assign(masked);
    if (assign != std::string::npos && assign < paren) return false;
    if (masked.find(')', paren) == std::string::npos) return false;
    const auto pos = static_cast<std::size_t>(m.position(1));
    decl = add_decl(DeclKind::method, name, h.first_line(), h.lines[pos]);
    return true;
  }

  void open_brace(int line) {
    Header& h = header();
    if (h.paren_depth > 0) {
      stack_.push_back(Scope{ScopeKind::inline_block, std::nullopt, {}});
      return;
    }
    const std::string masked = mask_annotations(h.text);
    std::size_t decl = 0;
    if (!h.blank() && try_class(h, masked, decl)) {
      h.clear();
      stack_.push_back(Scope{ScopeKind::class_body, decl, {}});
      return;
    }
    if (kind() == ScopeKind::class_body && !h.blank()) {
      if (try_method(h, masked, decl)) {
        h.clear();
        stack_.push_back(Scope{ScopeKind::method_body, decl, {}});
        return;
      }
      if (top_level_assign(masked) != std::string::npos) {
        h.push('{', line);
        stack_.push_back(Scope{ScopeKind::inline_block, std::nullopt, {}});
        return;
      }
    }
    h.clear();
    stack_.push_back(Scope{ScopeKind::block, std::nullopt, {}});
  }

  void close_brace(int line) {
    if (stack_.size() <= 1) return;  // stray brace
    const Scope closing = std::move(stack_.back());
    stack_.pop_back();
    if (closing.decl) {
      auto& p = decls_[*closing.decl];
      p.decl.end_line = line;
      p.closed = true;
    }
    if (closing.kind == ScopeKind::inline_block) {
      header().push('}', line);
    } else {
      header().clear();
    }
  }

  void end_statement(int line) {
    if (kind() == ScopeKind::class_body) add_fields(header(), line);
    header().clear();
  }

  void add_fields(const Header& h, int line) {
    if (h.blank()) return;
    const std::string masked = mask_annotations(h.text);
    std::smatch m;
    if (scala_ && std::regex_search(masked, m, scala_val_re())) {
      const auto pos = static_cast<std::size_t>(m.position(1));
      auto idx = add_decl(DeclKind::field, m.str(1), h.first_line(), h.lines[pos]);
      decls_[idx].decl.end_line = line;
      decls_[idx].closed = true;
      return;
    }
    const auto assign = top_level_assign(masked);
    const auto paren = masked.find('(');
    if (paren != std::string::npos && (assign == std::string::npos || paren < assign)) return;
    const auto first_word = masked.find_first_not_of(" \t");
    if (first_word != std::string::npos &&
        (masked.compare(first_word, 6, "import") == 0 || masked.compare(first_word, 7, "package") == 0)) {
      return;
    }

    // Declarators are separated by top-level commas; each one's name is the
    // last identifier before its initializer.
    int depth = 0;
    std::size_t part_start = 0;
    bool in_init = false;
    auto emit = [&](std::size_t from, std::size_t to) {
      std::size_t e = to;
      while (e > from && !is_ident_char(masked[e - 1])) --e;
      std::size_t b = e;
      while (b > from && is_ident_char(masked[b - 1])) --b;
      if (b == e || std::isdigit(static_cast<unsigned char>(masked[b]))) return;
      auto idx = add_decl(DeclKind::field, masked.substr(b, e - b), h.first_line(), h.lines[b]);
      decls_[idx].decl.end_line = line;
      decls_[idx].closed = true;
    };
    std::size_t name_end = std::string::npos;
    for (std::size_t i = 0; i <= masked.size(); ++i) {
      const char c = i < masked.size() ? masked[i] : ',';
      if (c == '(' || c == '[' || c == '<' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '>' || c == '}') --depth;
      if (depth > 0) continue;
      if (c == '=' && !in_init && i == top_level_assign(masked.substr(0, i + 1))) {
        name_end = i;
        in_init = true;
      } else if (c == ',' && (i == masked.size() || depth == 0)) {
        emit(part_start, name_end == std::string::npos ? i : name_end);
        part_start = i + 1;
        name_end = std::string::npos;
        in_init = false;
      }
    }
  }

  // Scala statements end at a newline unless the line visibly continues.
  void scala_line_end(int line) {
    if (kind() != ScopeKind::class_body) return;
    Header& h = header();
    if (h.blank() || h.paren_depth > 0) return;
    const auto last = h.text.find_last_not_of(" \t\r");
    const char tail = h.text[last];
    if (std::string_view("=,.(:+-*/&|<>[").find(tail) != std::string_view::npos) return;
    const std::string masked = mask_annotations(h.text);
    std::smatch m;
    if (std::regex_search(masked, m, scala_val_re())) {
      add_fields(h, line);
      h.clear();
      return;
    }
    if (std::regex_search(masked, m, scala_def_re())) {
      if (top_level_assign(masked) == std::string::npos) return;  // body on next line
      const auto pos = static_cast<std::size_t>(m.position(1));
      auto idx = add_decl(DeclKind::method, m.str(1), h.first_line(), h.lines[pos]);
      decls_[idx].decl.end_line = line;
      decls_[idx].closed = true;
      h.clear();
      return;
    }
    if (std::regex_search(masked, m, scala_class_re())) return;  // `extends` may follow
    h.clear();
  }

  DeclIndex finish(const std::string& file_path, int last_line) {
    DeclIndex out;
    out.file_path = file_path;
    out.line_count = last_line - (src_.empty() || src_.back() == '\n' ? 1 : 0);

    // A declaration survives only if it and all its enclosing classes closed.
    std::vector<char> alive(decls_.size(), 0);
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      bool ok = decls_[i].closed;
      for (auto e = decls_[i].enclosing; ok && e; e = decls_[*e].enclosing) ok = decls_[*e].closed;
      alive[i] = ok;
    }
    std::vector<std::optional<std::size_t>> class_slot(decls_.size());
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      if (alive[i] && decls_[i].decl.kind == DeclKind::class_decl) {
        class_slot[i] = out.classes.size();
        out.classes.push_back(decls_[i].decl);
      }
    }
    auto remap = [&](std::size_t i) -> std::optional<std::size_t> {
      const auto e = decls_[i].enclosing;
      return e ? class_slot[*e] : std::nullopt;
    };
    for (std::size_t i = 0, c = 0; i < decls_.size(); ++i) {
      if (!alive[i]) continue;
      Decl d = decls_[i].decl;
      d.enclosing = remap(i);
      switch (d.kind) {
        case DeclKind::class_decl: out.classes[c++].enclosing = d.enclosing; break;
        case DeclKind::method:
          if (d.enclosing) out.methods.push_back(std::move(d));
          break;
        case DeclKind::field:
          if (d.enclosing) out.fields.push_back(std::move(d));
          break;
      }
    }
    return out;
  }

  std::string src_;
  bool scala_;
  std::vector<Scope> stack_;
  std::vector<PendingDecl> decls_;
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Candidate simple names for a detector-reported class name such as
// "org.jclouds.ContextBuilderTest" or "Outer$Inner".
std::vector<std::string> class_name_candidates(const std::string& reported) {
  std::vector<std::string> out{reported};
  const auto dot = reported.rfind('.');
  std::string simple = dot == std::string::npos ? reported : reported.substr(dot + 1);
  out.push_back(simple);
  const auto dollar = simple.rfind('$');
  if (dollar != std::string::npos && dollar + 1 < simple.size()) {
    const auto tail = simple.substr(dollar + 1);
    if (!std::all_of(tail.begin(), tail.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      out.push_back(tail);
    }
  }
  return out;
}

const Decl* innermost(const std::vector<const Decl*>& ds) {
  const Decl* best = nullptr;
  for (const auto* d : ds) {
    if (!best || d->depth > best->depth ||
        (d->depth == best->depth && d->start_line > best->start_line)) {
      best = d;
    }
  }
  return best;
}

}  // namespace

DeclIndex build_decl_index(std::string_view text, const std::string& file_path) {
  return Scanner(text, ends_with(file_path, ".scala")).run(file_path);
}

WarningContext locate_context(const WarningInstance& w, const DeclIndex& index) {
  WarningContext ctx;
  const int line = w.start_line;

  std::optional<std::size_t> cls_slot;
  if (!w.class_name.empty()) {
    const auto names = class_name_candidates(w.class_name);
    std::vector<const Decl*> named, named_containing;
    for (const auto& c : index.classes) {
      if (std::find(names.begin(), names.end(), c.name) == names.end()) continue;
      named.push_back(&c);
      if (c.range().contains(line)) named_containing.push_back(&c);
    }
    if (const auto* d = innermost(named_containing.empty() ? named : named_containing)) {
      ctx.cls = *d;
      cls_slot = static_cast<std::size_t>(d - index.classes.data());
    }
  }
  if (!ctx.cls) {
    std::vector<const Decl*> containing;
    for (const auto& c : index.classes) {
      if (c.range().contains(line)) containing.push_back(&c);
    }
    if (const auto* d = innermost(containing)) {
      ctx.cls = *d;
      cls_slot = static_cast<std::size_t>(d - index.classes.data());
    }
  }

  std::string method_name = w.method_name;
  if (method_name == "<init>" && ctx.cls) method_name = ctx.cls->name;
  std::vector<const Decl*> named_methods, containing_methods;
  for (const auto& m : index.methods) {
    if (!m.range().contains(line)) continue;
    containing_methods.push_back(&m);
    if (!method_name.empty() && m.name == method_name) named_methods.push_back(&m);
  }
  if (const auto* d = innermost(named_methods.empty() ? containing_methods : named_methods)) {
    ctx.mth = *d;
  }

  if (!w.field_name.empty()) {
    for (const auto& f : index.fields) {
      if (f.name != w.field_name) continue;
      if (cls_slot && f.enclosing != cls_slot) continue;
      ctx.field = f;
      break;
    }
  }
  return ctx;
}

nlohmann::json to_json(const DeclIndex& index) {
  auto list = [](const std::vector<Decl>& ds) {
    auto arr = nlohmann::json::array();
    for (const auto& d : ds) {
      arr.push_back({{"name", d.name},
                     {"kind", std::string(to_string(d.kind))},
                     {"start_line", d.start_line},
                     {"end_line", d.end_line},
                     {"declaration_line", d.declaration_line},
                     {"enclosing", d.enclosing ? nlohmann::json(*d.enclosing) : nlohmann::json()}});
    }
    return arr;
  };
  return {{"file_path", index.file_path},
          {"line_count", index.line_count},
          {"classes", list(index.classes)},
          {"methods", list(index.methods)},
          {"fields", list(index.fields)}};
}

}  // namespace statictracker
