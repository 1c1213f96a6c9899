#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace hpsql {

/// One JSON value per non-blank line. `document` names the source in
/// DocumentParseError messages (position = 0-based line).
std::vector<nlohmann::json> parse_jsonl(std::string_view text, const std::string& document);
std::vector<nlohmann::json> read_jsonl(const std::string& path);

/// Compact, key-sorted lines, each terminated by '\n'.
std::string to_jsonl(const std::vector<nlohmann::json>& records);
/// Writes via a temporary file and rename so readers never see partial output.
void write_text_file(const std::string& path, const std::string& text);
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records);

}  // namespace hpsql
