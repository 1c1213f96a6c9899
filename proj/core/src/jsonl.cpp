#include "hpsql/jsonl.h"

#include <filesystem>
#include <fstream>

#include "hpsql/error.h"
#include "hpsql/schema.h"

namespace hpsql {

std::vector<nlohmann::json> parse_jsonl(std::string_view text, const std::string& document) {
  std::vector<nlohmann::json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw DocumentParseError(document, line_no, e.what());
      }
    }
    pos = end + 1;
    ++line_no;
  }
  return out;
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) { return parse_jsonl(read_file(path), path); }

std::string to_jsonl(const std::vector<nlohmann::json>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InfrastructureError("cannot write " + temp.string());
    out << text;
    if (!out) throw InfrastructureError("short write to " + temp.string());
  }
  fs::rename(temp, target);
}

void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records) {
  write_text_file(path, to_jsonl(records));
}

}  // namespace hpsql
