// The four per-pair matching strategies.

#include <cctype>
#include <cstdlib>

#include "statictracker/errors.hpp"
#include "statictracker/matcher.hpp"

namespace statictracker {

std::string_view to_string(TrackMode m) {
  return m == TrackMode::sota ? "sota" : "statictracker";
}

std::optional<TrackMode> mode_from_string(std::string_view s) {
  if (s == "sota") return TrackMode::sota;
  if (s == "statictracker") return TrackMode::statictracker;
  return std::nullopt;
}

void validate(const MatcherConfig& cfg) {
  if (cfg.location_threshold < 0) {
    throw ConfigError("location threshold must be >= 0, got " +
                      std::to_string(cfg.location_threshold));
  }
  if (cfg.hash_top_n < 1) {
    throw ConfigError("hash top-n must be >= 1, got " + std::to_string(cfg.hash_top_n));
  }
}

void Diagnostics::add(std::string message) {
  std::lock_guard lock(mu_);
  messages_.push_back(std::move(message));
}

std::vector<std::string> Diagnostics::sorted() const {
  std::lock_guard lock(mu_);
  auto out = messages_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool same_names(const WarningInstance& a, const WarningInstance& b) {
  return a.warning_type == b.warning_type && a.class_name == b.class_name &&
         a.method_name == b.method_name && a.field_name == b.field_name;
}

void note(Diagnostics* diags, std::string message) {
  if (diags) diags->add(std::move(message));
}

std::optional<std::vector<std::string_view>> snippet(const WarningInstance& w,
                                                     const Snapshot& snap, bool trim_trailing,
                                                     Diagnostics* diags) {
  const SourceFile* file = snap.find(w.file_path);
  if (!file) {
    note(diags, "snippet: " + w.stable_id.str() + ": " + w.file_path + " not in " + snap.label() +
                    " snapshot");
    return std::nullopt;
  }
  if (w.start_line < 1 || w.end_line > file->line_count() || w.start_line > w.end_line) {
    note(diags, "snippet: " + w.stable_id.str() + ": lines " + std::to_string(w.start_line) + "-" +
                    std::to_string(w.end_line) + " outside " + w.file_path + " (" +
                    std::to_string(file->line_count()) + " lines)");
    return std::nullopt;
  }
  std::vector<std::string_view> out;
  for (int l = w.start_line; l <= w.end_line; ++l) {
    std::string_view text = *file->line(l);
    if (trim_trailing) {
      const auto e = text.find_last_not_of(" \t\r");
      text = e == std::string_view::npos ? std::string_view{} : text.substr(0, e + 1);
    }
    out.push_back(text);
  }
  return out;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

bool exact_match(const WarningInstance& a, const WarningInstance& b) {
  return exact_key(a) == exact_key(b);
}

bool location_match(const WarningInstance& a, const WarningInstance& b, const DiffResult& diff,
                    const MatcherConfig& cfg, Diagnostics* diags) {
  if (!same_names(a, b)) return false;
  try {
    const int pre = anchor_offset(diff, a.start_line, Side::pre).offset;
    const int post = anchor_offset(diff, b.start_line, Side::post).offset;
    return std::abs(pre - post) <= cfg.location_threshold;
  } catch (const PreconditionError& e) {
    note(diags, "location: " + a.stable_id.str() + " vs " + b.stable_id.str() + ": " + e.what());
    return false;
  }
}

bool snippet_match(const WarningInstance& a, const WarningInstance& b, const Snapshot& pre,
                   const Snapshot& post, const MatcherConfig& cfg, Diagnostics* diags) {
  if (!same_names(a, b)) return false;
  if (a.end_line - a.start_line != b.end_line - b.start_line) return false;
  const auto sa = snippet(a, pre, cfg.snippet_trim_trailing_ws, diags);
  const auto sb = snippet(b, post, cfg.snippet_trim_trailing_ws, diags);
  return sa && sb && *sa == *sb;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_word_char(c)) {
      std::size_t k = i;
      while (k < text.size() && is_word_char(text[k])) ++k;
      out.emplace_back(text.substr(i, k - i));
      i = k;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

std::uint64_t hash_tokens(const std::vector<std::string>& tokens, std::size_t from,
                          std::size_t to) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (std::size_t i = from; i < to && i < tokens.size(); ++i) {
    if (i != from) mix(0x1f);
    for (const char c : tokens[i]) mix(static_cast<unsigned char>(c));
  }
  return h;
}

bool hash_match(const WarningInstance& a, const WarningInstance& b, const Snapshot& pre,
                const Snapshot& post, const MatcherConfig& cfg, Diagnostics* diags) {
  const auto sa = snippet(a, pre, cfg.snippet_trim_trailing_ws, diags);
  const auto sb = snippet(b, post, cfg.snippet_trim_trailing_ws, diags);
  if (!sa || !sb) return false;
  auto join = [](const std::vector<std::string_view>& lines) {
    std::string s;
    for (const auto& l : lines) {
      s.append(l);
      s.push_back('\n');
    }
    return s;
  };
  const auto ta = tokenize(join(*sa));
  const auto tb = tokenize(join(*sb));
  if (ta.empty() || tb.empty()) return false;
  const auto n = static_cast<std::size_t>(cfg.hash_top_n);
  if (hash_tokens(ta, 0, n) == hash_tokens(tb, 0, n) &&
      std::min(ta.size(), n) == std::min(tb.size(), n)) {
    return true;
  }
  return ta.size() > n && tb.size() > n &&
         hash_tokens(ta, n, ta.size()) == hash_tokens(tb, n, tb.size());
}

}  // namespace statictracker
