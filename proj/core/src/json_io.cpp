#include "json_io.hpp"

#include <algorithm>

#include "statictracker/errors.hpp"

namespace statictracker::detail {

nlohmann::json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed " + std::string(what) + ": " + e.what(), line, col);
  }
}

std::string dump_canonical(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace statictracker::detail
