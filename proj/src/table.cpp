#include "plotqa/table.hpp"

#include <cstdio>

#include "plotqa/common.hpp"

namespace plotqa {

SemiStructuredTable::SemiStructuredTable(std::vector<std::string> rows,
                                         std::vector<std::string> cols)
    : row_headers(std::move(rows)), col_headers(std::move(cols)) {
  cells.assign(row_headers.size(), std::vector<std::optional<double>>(col_headers.size()));
}

size_t SemiStructuredTable::filled() const {
  size_t n = 0;
  for (const auto& r : cells)
    for (const auto& c : r) n += c.has_value();
  return n;
}

std::vector<std::string> check_table(const SemiStructuredTable& t) {
  std::vector<std::string> v;
  if (t.cells.size() != t.rows()) v.push_back("row count mismatch");
  for (const auto& r : t.cells)
    if (r.size() != t.cols()) {
      v.push_back("column count mismatch");
      break;
    }
  for (const auto& h : t.row_headers)
    if (h.empty()) v.push_back("empty row header");
  for (const auto& h : t.col_headers)
    if (h.empty()) v.push_back("empty column header");
  return v;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
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
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted CSV field");
  if (any) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

std::string table_to_csv(const SemiStructuredTable& t) {
  std::string out;
  if (t.rows() == 0 && t.cols() == 0) return out;
  for (const auto& h : t.col_headers) out += "," + csv_field(h);
  out += "\n";
  for (size_t r = 0; r < t.rows(); ++r) {
    out += csv_field(t.row_headers[r]);
    for (size_t c = 0; c < t.cols(); ++c) {
      out += ",";
      if (const auto& v = t.cells[r][c]) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        out += buf;
      }
    }
    out += "\n";
  }
  return out;
}

SemiStructuredTable table_from_csv(std::string_view csv) {
  const auto records = parse_csv_records(csv);
  if (records.empty()) return {};
  const auto& header = records[0];
  std::vector<std::string> cols(header.begin() + (header.empty() ? 0 : 1), header.end());
  std::vector<std::string> rows;
  for (size_t i = 1; i < records.size(); ++i) rows.push_back(records[i].at(0));
  SemiStructuredTable t(rows, cols);
  for (size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.size() != cols.size() + 1)
      throw SchemaError("CSV record has wrong number of fields", static_cast<int>(i + 1));
    for (size_t c = 0; c < cols.size(); ++c) {
      if (rec[c + 1].empty()) continue;
      auto v = parse_number(rec[c + 1]);
      if (!v) throw SchemaError("CSV cell is not a number", static_cast<int>(i + 1));
      t.cells[i - 1][c] = *v;
    }
  }
  return t;
}

}  // namespace plotqa
