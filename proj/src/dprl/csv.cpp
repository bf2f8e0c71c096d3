#include "dprl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dprl/common.hpp"

namespace dprl {

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_error, "cannot open CSV: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_csv_string(buffer.str());
}

CsvTable read_csv_string(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // a lone empty field is a blank line, not a record
    if (record.size() > 1 || !record[0].empty()) records.push_back(record);
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        require(!field_started || field.empty(), ErrorCode::parse_error,
                "stray quote inside an unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  require(!quoted, ErrorCode::parse_error, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  require(!records.empty(), ErrorCode::parse_error, "CSV has no header row");
  CsvTable table;
  table.header = records.front();
  table.rows.assign(records.begin() + 1, records.end());
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_sig17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace dprl
