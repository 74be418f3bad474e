#pragma once

#include <string>
#include <vector>

#include "xsess/types.hpp"

namespace xsess {

// One parsed CSV record plus the line it started on (header is line 1).
struct CsvRow {
  std::vector<std::string> fields;
  long line = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  // Column position of `name`; throws naming the file when absent.
  int column(const std::string& name, const std::string& file) const;
};

// Strict RFC-4180-style reader: quoted fields, doubled-quote escapes,
// LF or CRLF records. Every row must have exactly as many fields as the
// header; violations throw with the offending line number.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_escape(const std::string& field);

}  // namespace xsess
