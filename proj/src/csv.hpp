#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace percept::csv {

struct Line {
  std::size_t number = 0;  // 1-based
  std::string_view text;
};

/// Splits UTF-8 text into physical lines, stripping a leading BOM and any
/// trailing CR. Blank lines are dropped.
std::vector<Line> split_lines(std::string_view text);

/// Splits one comma-separated row. Fields may be double-quoted with "" as
/// the escape for a literal quote. Returns nullopt on an unterminated quote
/// or stray characters after a closing quote.
std::optional<std::vector<std::string>> split_row(std::string_view row);

/// Quotes a field if it contains a comma, quote, or leading/trailing space.
std::string escape_field(std::string_view field);

}  // namespace percept::csv
