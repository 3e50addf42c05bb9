#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "plotqa/answer.hpp"
#include "plotqa/table.hpp"
#include "plotqa/templates.hpp"

namespace plotqa::tableqa {

// Row nodes link to entity nodes (cell values and the row's own header)
// through edges labeled with the column header.
struct KnowledgeGraph {
  struct Entity {
    std::string text;
    std::optional<double> number;
  };
  struct Edge {
    int row = 0;
    std::string label;
    int entity = 0;
  };
  static constexpr const char* kRowHeaderLabel = "@row";

  std::vector<std::string> row_nodes;  // row header per row node
  std::vector<std::string> col_headers;
  std::vector<Entity> entities;
  std::vector<Edge> edges;

  std::optional<int> row_of(std::string_view header) const;
  std::optional<int> col_of(std::string_view header) const;
  // Value on the edge row --label--> entity, if present.
  std::optional<double> value(int row, int col) const;
  SemiStructuredTable to_table() const;

 private:
  friend KnowledgeGraph build_kg(const SemiStructuredTable& t);
  std::unordered_map<std::string, int> row_index_, col_index_;
  std::vector<std::vector<int>> cell_entity_;  // [row][col] -> entity or -1
};

// Throws Error on duplicate row or column headers.
KnowledgeGraph build_kg(const SemiStructuredTable& t);

struct LogicalForm {
  enum class Op {
    num, str,
    col,     // (col "name") or (col #k)
    series,  // (series "phrase"): case-insensitive header match, else the sole column
    cell, column, slice,
    max, min, sum, mean, median, size, argmax, argmin, nth_from,
    diff, ratio, add, abs,
    count_where, majority_where, compare,
    monotonic_increasing, strictly_dominates, max_gap_except,
  };
  Op op = Op::num;
  double number = 0;
  std::string text;
  bool by_index = false;  // for col
  std::vector<LogicalForm> args;

  static LogicalForm lit(double v);
  static LogicalForm lit(std::string s);
  static LogicalForm col_named(std::string name);
  static LogicalForm col_at(int index);
  static LogicalForm series(std::string phrase);
  static LogicalForm call(Op op, std::vector<LogicalForm> args);

  std::string to_sexpr() const;
  bool operator==(const LogicalForm& o) const;
};

std::string_view op_name(LogicalForm::Op op);

// Intermediate values during execution.
struct LabeledList {
  std::vector<std::string> labels;
  std::vector<double> values;
};
using Value = std::variant<double, bool, std::string, LabeledList>;

struct ExecOptions {
  bool strict_monotonic = false;
};

// Throws AnswerUnavailable for missing cells/headers, zero denominators and
// empty aggregates.
Value evaluate(const LogicalForm& lf, const KnowledgeGraph& kg, const ExecOptions& opt = {});
Answer execute(const LogicalForm& lf, const KnowledgeGraph& kg, const ExecOptions& opt = {});

// Table-derived headers used to pick among competing parses.
struct ParseContext {
  std::vector<std::string> row_headers;
  std::vector<std::string> col_headers;
  static ParseContext of(const SemiStructuredTable& t) { return {t.row_headers, t.col_headers}; }
};

struct ParseResult {
  int template_id = 0;
  qgen::Bindings bindings;
  std::optional<LogicalForm> lf;  // absent for templates answered from the plot geometry
};

// Logical form for a table-answerable template, or nullopt.
std::optional<LogicalForm> logical_form_for(int template_id, const qgen::Bindings& b);

// Throws UnparseableQuestion when no template matches.
ParseResult parse(std::string_view text, const ParseContext* ctx = nullptr,
                  const qgen::Lexicon& lex = qgen::default_lexicon(),
                  const std::vector<qgen::Template>& templates = qgen::default_templates());

// execute(parse(text).lf, build_kg(t)); errors become unavailable answers.
Answer answer(std::string_view text, const SemiStructuredTable& t, const ExecOptions& opt = {});

}  // namespace plotqa::tableqa
