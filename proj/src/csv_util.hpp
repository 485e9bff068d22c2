#pragma once

// Minimal RFC 4180 record handling shared by the table and report readers.

#include <string>
#include <string_view>
#include <vector>

#include "biasshift/error.hpp"
#include "biasshift/format.hpp"

namespace biasshift::csv {

struct CsvLocation {
  std::string_view source;
  std::size_t line = 0;
};

// Quoted fields may contain commas and doubled quotes but not line breaks.
// Unquoted fields are trimmed of surrounding blanks.
inline std::vector<std::string> split_record(std::string_view line, const CsvLocation& loc) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else if (!was_quoted) {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw InputError(std::string(loc.source) + ":" + std::to_string(loc.line) +
                     ": unterminated quoted field");
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace biasshift::csv
