#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace statictracker::detail {

// Parses a JSON document; syntax errors become ParseError with the 1-based
// line and column of the offending byte. `what` prefixes the message.
nlohmann::json parse_json_text(std::string_view text, std::string_view what);

// Serialises with sorted keys (nlohmann's object is a std::map) and a
// trailing newline.
std::string dump_canonical(const nlohmann::json& doc);

}  // namespace statictracker::detail
