#include "xsess/core/csv.hpp"

#include <fstream>
#include <sstream>

namespace xsess {

int CsvTable::column(const std::string& name, const std::string& file) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  fail(file + ": missing required column '" + name + "'");
}

namespace {

// Splits the whole file into records, honouring quotes. Newlines inside
// quoted fields are preserved; the record keeps its starting line number.
std::vector<CsvRow> parse_records(const std::string& text, const std::string& path) {
  std::vector<CsvRow> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  long line = 1;
  long record_line = 1;

  auto end_field = [&] {
    fields.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back({std::move(fields), record_line});
    fields = {};
    record_line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          fail(path + ": line " + std::to_string(line) + ": stray quote inside field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        // swallow; the matching '\n' ends the record
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    fail(path + ": line " + std::to_string(record_line) + ": unterminated quoted field");
  }
  if (!field.empty() || !fields.empty()) {
    ++line;
    end_record();
  }
  return records;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = parse_records(buf.str(), path);
  if (records.empty()) fail(path + ": empty file (no header)");

  CsvTable table;
  table.header = std::move(records.front().fields);
  for (std::size_t i = 1; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // trailing blank line
    if (rec.fields.size() != table.header.size()) {
      fail(path + ": line " + std::to_string(rec.line) + ": expected " +
           std::to_string(table.header.size()) + " fields, got " +
           std::to_string(rec.fields.size()));
    }
    table.rows.push_back(std::move(rec));
  }
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path + ": cannot open file for writing");
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

}  // namespace xsess
