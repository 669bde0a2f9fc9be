#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geyser {

/// One parsed CSV document: header row plus data rows, all fields as text.
/// Rows keep their source position so callers can report per-row problems;
/// with quoted multi-line fields the position is the logical record index
/// (header = record 1), not a physical line number.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 parse: comma separated, double-quote quoting with "" escapes,
/// quoted fields may contain commas and newlines, CRLF or LF line ends,
/// final newline optional. Throws CsvError on an unterminated quote or a
/// document with no header row.
CsvTable parse_csv(std::string_view text);

/// Quote a field only when RFC-4180 requires it.
std::string csv_escape(std::string_view field);

/// Append one CSV record (with trailing '\n') to out.
void append_csv_row(std::string& out, const std::vector<std::string>& fields);

} // namespace geyser
