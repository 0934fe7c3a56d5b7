#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rcpm::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain delimiters, doubled quotes and
// line breaks. CRLF and LF both terminate records. A trailing empty line is
// not a record. Throws ParseError on an unterminated quoted field.
std::vector<Row> parse(std::string_view text, char delimiter = ',');

// Quotes the field only when it contains the delimiter, a quote or a line break.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, const Row& row, char delimiter = ',');

}  // namespace rcpm::csv
