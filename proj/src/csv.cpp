#include "csv.hpp"

namespace percept::csv {

std::vector<Line> split_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    lines.push_back({number, line});
  }
  return lines;
}

std::optional<std::vector<std::string>> split_row(std::string_view row) {
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  while (true) {
    current.clear();
    if (i < row.size() && row[i] == '"') {
      ++i;
      bool closed = false;
      while (i < row.size()) {
        if (row[i] == '"') {
          if (i + 1 < row.size() && row[i + 1] == '"') {
            current.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        current.push_back(row[i++]);
      }
      if (!closed) return std::nullopt;
      if (i < row.size() && row[i] != ',') return std::nullopt;
    } else {
      while (i < row.size() && row[i] != ',') {
        if (row[i] == '"') return std::nullopt;
        current.push_back(row[i++]);
      }
    }
    fields.push_back(current);
    if (i >= row.size()) break;
    ++i;  // comma
  }
  return fields;
}

std::string escape_field(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"") != std::string_view::npos ||
                      (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace percept::csv
