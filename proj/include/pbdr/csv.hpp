#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pbdr::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

/// Comma-delimited, optional double quotes with "" escapes, CRLF tolerated.
/// Blank lines are skipped. Throws ParseError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string read_file(const std::string& path);

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Plain decimal number, surrounding blanks ignored. Rejects anything else:
/// thousands separators, trailing text, inf and nan.
std::optional<double> parse_number(std::string_view text);

std::string trim(std::string_view text);

}  // namespace pbdr::csv
