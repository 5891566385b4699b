#include "statictracker/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "json_io.hpp"
#include "statictracker/errors.hpp"

namespace statictracker {

namespace fs = std::filesystem;

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string sanitize_utf8(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto n = bytes.size();
  auto cont = [&](std::size_t k) {
    return k < n && (static_cast<unsigned char>(bytes[k]) & 0xC0) == 0x80;
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = cont(i + 1) ? 2 : 0;
    } else if (c >= 0xE0 && c <= 0xEF) {
      if (cont(i + 1) && cont(i + 2)) {
        const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
        const bool overlong = c == 0xE0 && c1 < 0xA0;
        const bool surrogate = c == 0xED && c1 >= 0xA0;
        len = (overlong || surrogate) ? 0 : 3;
      }
    } else if (c >= 0xF0 && c <= 0xF4) {
      if (cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
        const bool overlong = c == 0xF0 && c1 < 0x90;
        const bool too_big = c == 0xF4 && c1 >= 0x90;
        len = (overlong || too_big) ? 0 : 4;
      }
    }
    if (len == 0) {
      out.append(kReplacement);
      ++i;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

SourceFile::SourceFile(std::string text) : text_(std::move(text)), lines_(split_lines(text_)) {}

std::optional<std::string_view> SourceFile::line(int number) const {
  if (number < 1 || number > line_count()) return std::nullopt;
  return lines_[static_cast<std::size_t>(number - 1)];
}

void Snapshot::add_file(std::string path, std::string text) {
  if (path.empty() || path.front() == '/') {
    throw ValidationError("snapshot path '" + path + "' is not relative");
  }
  std::string_view rest = path;
  while (!rest.empty()) {
    const auto slash = rest.find('/');
    const auto seg = rest.substr(0, slash);
    if (seg.empty() || seg == "." || seg == "..") {
      throw ValidationError("snapshot path '" + path + "' is not normalized");
    }
    if (slash == std::string_view::npos) break;
    rest = rest.substr(slash + 1);
  }
  files_[std::move(path)] = std::make_shared<const SourceFile>(std::move(text));
}

const SourceFile* Snapshot::find(const std::string& path) const {
  const auto it = files_.find(path);
  return it == files_.end() ? nullptr : it->second.get();
}

std::vector<std::string> Snapshot::paths() const {
  std::vector<std::string> out;
  out.reserve(files_.size());
  for (const auto& [p, _] : files_) out.push_back(p);
  return out;
}

Snapshot load_snapshot(const fs::path& root, std::string label, const SnapshotOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError("snapshot root not found: " + root.string());
  }
  Snapshot snap(std::move(label));
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError("cannot read snapshot root " + root.string() + ": " + ec.message());

  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      snap.add_diagnostic("directory walk error: " + ec.message());
      ec.clear();
      continue;
    }
    if (!it->is_regular_file(ec)) continue;
    const auto& p = it->path();
    const auto ext = p.extension().string();
    if (std::find(options.extensions.begin(), options.extensions.end(), ext) ==
        options.extensions.end()) {
      continue;
    }
    const auto rel = p.lexically_relative(root).generic_string();
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      snap.add_diagnostic("cannot read " + rel);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
      snap.add_diagnostic("read error in " + rel);
      continue;
    }
    snap.add_file(rel, sanitize_utf8(buf.str()));
  }
  return snap;
}

RenameMap parse_renames(std::string_view json_text) {
  const nlohmann::json doc = detail::parse_json_text(json_text, "renames JSON");
  if (!doc.is_array()) throw ValidationError("renames document must be an array");
  RenameMap out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& r = doc[i];
    if (!r.is_object() || !r.contains("pre_path") || !r.contains("post_path") ||
        !r["pre_path"].is_string() || !r["post_path"].is_string()) {
      throw ValidationError("rename #" + std::to_string(i + 1) +
                            " needs string pre_path and post_path");
    }
    out[r["pre_path"].get<std::string>()] = r["post_path"].get<std::string>();
  }
  return out;
}

RevisionPair::RevisionPair(Snapshot pre, Snapshot post, RenameMap renames,
                           std::set<std::string> changed)
    : pre_(std::move(pre)),
      post_(std::move(post)),
      renames_(std::move(renames)),
      changed_(std::move(changed)) {}

std::string RevisionPair::post_path_of(const std::string& pre_path) const {
  const auto it = renames_.find(pre_path);
  return it == renames_.end() ? pre_path : it->second;
}

bool RevisionPair::is_deleted(const std::string& pre_path) const {
  return !post_.contains(post_path_of(pre_path));
}

RevisionPair compute_revision_pair(Snapshot pre, Snapshot post, RenameMap renames) {
  std::set<std::string> targets;
  for (auto it = renames.begin(); it != renames.end();) {
    // Endpoints outside the snapshots (e.g. filtered extensions) are dropped.
    if (!pre.contains(it->first) || !post.contains(it->second) || it->first == it->second) {
      it = renames.erase(it);
      continue;
    }
    if (!targets.insert(it->second).second) {
      throw ValidationError("rename map is not injective: '" + it->second +
                            "' is the target of two files");
    }
    ++it;
  }

  // Byte-identical moves among files that exist on one side only.
  std::vector<std::string> pre_only;
  std::map<std::string, std::vector<std::string>> post_only_by_text;
  for (const auto& p : pre.paths()) {
    if (!post.contains(p) && !renames.contains(p)) pre_only.push_back(p);
  }
  for (const auto& p : post.paths()) {
    if ((!pre.contains(p) || renames.contains(p)) && !targets.contains(p)) {
      post_only_by_text[post.find(p)->text()].push_back(p);
    }
  }
  for (const auto& p : pre_only) {
    auto it = post_only_by_text.find(pre.find(p)->text());
    if (it == post_only_by_text.end() || it->second.empty()) continue;
    const auto target = it->second.front();
    it->second.erase(it->second.begin());
    renames[p] = target;
    targets.insert(target);
  }

  std::set<std::string> changed;
  for (const auto& p : pre.paths()) {
    const auto rn = renames.find(p);
    const std::string post_path = rn == renames.end() ? p : rn->second;
    const auto* after = post.find(post_path);
    if (after == nullptr) {
      changed.insert(p);
    } else if (after->text() != pre.find(p)->text()) {
      changed.insert(p);
      if (post_path != p) changed.insert(post_path);
    }
  }
  for (const auto& p : post.paths()) {
    if ((!pre.contains(p) || renames.contains(p)) && !targets.contains(p)) changed.insert(p);
  }
  return RevisionPair(std::move(pre), std::move(post), std::move(renames), std::move(changed));
}

}  // namespace statictracker
