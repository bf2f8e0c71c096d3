#pragma once

#include <string>
#include <vector>

namespace dprl {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and
// newlines; accepts LF and CRLF line ends; first record is the header.
CsvTable read_csv_file(const std::string& path);
CsvTable read_csv_string(const std::string& text);

// Quotes a field only when it needs it (comma, quote or newline inside).
std::string csv_escape(const std::string& field);

// Shortest decimal form with 17 significant digits; round-trips doubles.
std::string format_sig17(double value);

}  // namespace dprl
