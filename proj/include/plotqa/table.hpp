#pragma once

#include <optional>
#include <string>
#include <vector>

namespace plotqa {

// Row headers are categorical-axis ticks, column headers are legend labels
// (or the value-axis title for single-series plots).
struct SemiStructuredTable {
  std::vector<std::string> row_headers;
  std::vector<std::string> col_headers;
  std::vector<std::vector<std::optional<double>>> cells;  // [row][col]

  SemiStructuredTable() = default;
  SemiStructuredTable(std::vector<std::string> rows, std::vector<std::string> cols);

  size_t rows() const { return row_headers.size(); }
  size_t cols() const { return col_headers.size(); }
  size_t filled() const;
  bool operator==(const SemiStructuredTable&) const = default;
};

// Empty when dimensions are consistent and headers nonempty.
std::vector<std::string> check_table(const SemiStructuredTable& t);

// CSV: first row = "" followed by col headers; first column = row headers;
// empty field for missing cells. Values use round-trip precision.
std::string table_to_csv(const SemiStructuredTable& t);
SemiStructuredTable table_from_csv(std::string_view csv);

}  // namespace plotqa
