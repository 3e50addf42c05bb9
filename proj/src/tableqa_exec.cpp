#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "plotqa/common.hpp"
#include "plotqa/tableqa.hpp"

namespace plotqa::tableqa {

std::optional<int> KnowledgeGraph::row_of(std::string_view header) const {
  const auto it = row_index_.find(std::string(header));
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> KnowledgeGraph::col_of(std::string_view header) const {
  const auto it = col_index_.find(std::string(header));
  if (it == col_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KnowledgeGraph::value(int row, int col) const {
  const int e = cell_entity_.at(row).at(col);
  if (e < 0) return std::nullopt;
  return entities[e].number;
}

SemiStructuredTable KnowledgeGraph::to_table() const {
  SemiStructuredTable t(row_nodes, col_headers);
  for (const auto& e : edges) {
    if (e.label == kRowHeaderLabel) continue;
    const auto c = col_of(e.label);
    t.cells[e.row][*c] = entities[e.entity].number;
  }
  return t;
}

KnowledgeGraph build_kg(const SemiStructuredTable& t) {
  const auto problems = check_table(t);
  if (!problems.empty()) throw Error("invalid table: " + problems.front());
  KnowledgeGraph kg;
  kg.row_nodes = t.row_headers;
  kg.col_headers = t.col_headers;
  for (size_t r = 0; r < t.rows(); ++r)
    if (!kg.row_index_.emplace(t.row_headers[r], static_cast<int>(r)).second)
      throw Error("duplicate row header '" + t.row_headers[r] + "'");
  for (size_t c = 0; c < t.cols(); ++c) {
    if (t.col_headers[c] == KnowledgeGraph::kRowHeaderLabel)
      throw Error("column header collides with the reserved row label");
    if (!kg.col_index_.emplace(t.col_headers[c], static_cast<int>(c)).second)
      throw Error("duplicate column header '" + t.col_headers[c] + "'");
  }
  kg.cell_entity_.assign(t.rows(), std::vector<int>(t.cols(), -1));
  for (size_t r = 0; r < t.rows(); ++r) {
    const int row = static_cast<int>(r);
    kg.entities.push_back({t.row_headers[r], std::nullopt});
    kg.edges.push_back({row, KnowledgeGraph::kRowHeaderLabel,
                        static_cast<int>(kg.entities.size()) - 1});
    for (size_t c = 0; c < t.cols(); ++c) {
      const auto& v = t.cells[r][c];
      if (!v) continue;
      kg.entities.push_back({format_plain(*v), *v});
      const int e = static_cast<int>(kg.entities.size()) - 1;
      kg.edges.push_back({row, t.col_headers[c], e});
      kg.cell_entity_[r][c] = e;
    }
  }
  return kg;
}

// ---- Logical forms -------------------------------------------------------

using Op = LogicalForm::Op;

namespace {

constexpr std::pair<Op, const char*> kOpNames[] = {
    {Op::num, "num"},
    {Op::str, "str"},
    {Op::col, "col"},
    {Op::series, "series"},
    {Op::cell, "cell"},
    {Op::column, "column"},
    {Op::slice, "slice"},
    {Op::max, "max"},
    {Op::min, "min"},
    {Op::sum, "sum"},
    {Op::mean, "mean"},
    {Op::median, "median"},
    {Op::size, "size"},
    {Op::argmax, "argmax"},
    {Op::argmin, "argmin"},
    {Op::nth_from, "nth_from"},
    {Op::diff, "diff"},
    {Op::ratio, "ratio"},
    {Op::add, "add"},
    {Op::abs, "abs"},
    {Op::count_where, "count_where"},
    {Op::majority_where, "majority_where"},
    {Op::compare, "compare"},
    {Op::monotonic_increasing, "monotonic_increasing"},
    {Op::strictly_dominates, "strictly_dominates"},
    {Op::max_gap_except, "max_gap_except"},
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view op_name(Op op) {
  for (const auto& [o, n] : kOpNames)
    if (o == op) return n;
  return "?";
}

LogicalForm LogicalForm::lit(double v) {
  LogicalForm f;
  f.op = Op::num;
  f.number = v;
  return f;
}
LogicalForm LogicalForm::lit(std::string s) {
  LogicalForm f;
  f.op = Op::str;
  f.text = std::move(s);
  return f;
}
LogicalForm LogicalForm::col_named(std::string name) {
  LogicalForm f;
  f.op = Op::col;
  f.text = std::move(name);
  return f;
}
LogicalForm LogicalForm::col_at(int index) {
  LogicalForm f;
  f.op = Op::col;
  f.by_index = true;
  f.number = index;
  return f;
}
LogicalForm LogicalForm::series(std::string phrase) {
  LogicalForm f;
  f.op = Op::series;
  f.text = std::move(phrase);
  return f;
}
LogicalForm LogicalForm::call(Op op, std::vector<LogicalForm> args) {
  LogicalForm f;
  f.op = op;
  f.args = std::move(args);
  return f;
}

std::string LogicalForm::to_sexpr() const {
  switch (op) {
    case Op::num: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", number);
      return buf;
    }
    case Op::str: return quote(text);
    case Op::col:
      return by_index ? "(col #" + std::to_string(static_cast<int>(number)) + ")"
                      : "(col " + quote(text) + ")";
    case Op::series: return "(series " + quote(text) + ")";
    default: break;
  }
  std::string out = "(" + std::string(op_name(op));
  for (const auto& a : args) out += " " + a.to_sexpr();
  return out + ")";
}

bool LogicalForm::operator==(const LogicalForm& o) const {
  return op == o.op && number == o.number && text == o.text && by_index == o.by_index &&
         args == o.args;
}

// ---- Execution -----------------------------------------------------------

namespace {

[[noreturn]] void unavailable(const std::string& why) { throw AnswerUnavailable(why); }

struct Exec {
  const KnowledgeGraph& kg;
  const ExecOptions& opt;

  int resolve_col(const LogicalForm& f) const {
    if (f.op == Op::col) {
      if (f.by_index) {
        const int k = static_cast<int>(f.number);
        if (k < 0 || k >= static_cast<int>(kg.col_headers.size()))
          unavailable("no column #" + std::to_string(k));
        return k;
      }
      const auto c = kg.col_of(f.text);
      if (!c) unavailable("no column '" + f.text + "'");
      return *c;
    }
    if (f.op == Op::series) {
      for (size_t c = 0; c < kg.col_headers.size(); ++c)
        if (iequals(kg.col_headers[c], f.text)) return static_cast<int>(c);
      if (kg.col_headers.size() == 1) return 0;
      unavailable("no column for '" + f.text + "'");
    }
    throw Error("expected a column reference, got " + f.to_sexpr());
  }

  int resolve_row(const LogicalForm& f) const {
    const std::string name = str(f);
    const auto r = kg.row_of(name);
    if (!r) unavailable("no row '" + name + "'");
    return *r;
  }

  double num(const LogicalForm& f) const {
    const Value v = eval(f);
    if (const double* d = std::get_if<double>(&v)) return *d;
    throw Error("expected a number from " + f.to_sexpr());
  }
  std::string str(const LogicalForm& f) const {
    if (f.op != Op::str) throw Error("expected a string literal, got " + f.to_sexpr());
    return f.text;
  }
  LabeledList list(const LogicalForm& f) const {
    Value v = eval(f);
    if (auto* l = std::get_if<LabeledList>(&v)) return std::move(*l);
    throw Error("expected a list from " + f.to_sexpr());
  }
  static LabeledList nonempty(LabeledList l, const char* what) {
    if (l.values.empty()) unavailable(std::string(what) + " of an empty list");
    return l;
  }
  void arity(const LogicalForm& f, size_t n) const {
    if (f.args.size() != n)
      throw Error(std::string(op_name(f.op)) + " expects " + std::to_string(n) + " arguments");
  }

  static bool apply_cmp(std::string_view op, double a, double b) {
    if (op == ">") return a > b;
    if (op == "<") return a < b;
    if (op == "=") return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
    throw Error("unknown comparison '" + std::string(op) + "'");
  }

  // Elementwise combination over rows present in both lists.
  static LabeledList zip(const LabeledList& a, const LabeledList& b, double (*fn)(double, double)) {
    LabeledList out;
    for (size_t i = 0; i < a.labels.size(); ++i) {
      const auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
      if (it == b.labels.end()) continue;
      out.labels.push_back(a.labels[i]);
      out.values.push_back(fn(a.values[i], b.values[it - b.labels.begin()]));
    }
    return out;
  }

  Value arith(const LogicalForm& f, double (*fn)(double, double)) const {
    arity(f, 2);
    const Value a = eval(f.args[0]), b = eval(f.args[1]);
    const auto* la = std::get_if<LabeledList>(&a);
    const auto* lb = std::get_if<LabeledList>(&b);
    if (la && lb) return zip(*la, *lb, fn);
    const auto* da = std::get_if<double>(&a);
    const auto* db = std::get_if<double>(&b);
    if (da && db) return fn(*da, *db);
    throw Error(std::string(op_name(f.op)) + " needs two numbers or two lists");
  }

  Value eval(const LogicalForm& f) const {
    switch (f.op) {
      case Op::num: return f.number;
      case Op::str: return f.text;
      case Op::col:
      case Op::series: throw Error("column reference used as a value");
      case Op::cell: {
        arity(f, 2);
        const int r = resolve_row(f.args[0]), c = resolve_col(f.args[1]);
        const auto v = kg.value(r, c);
        if (!v) unavailable("empty cell (" + kg.row_nodes[r] + ", " + kg.col_headers[c] + ")");
        return *v;
      }
      case Op::column: {
        arity(f, 1);
        const int c = resolve_col(f.args[0]);
        LabeledList l;
        for (size_t r = 0; r < kg.row_nodes.size(); ++r) {
          const auto v = kg.value(static_cast<int>(r), c);
          if (!v) continue;
          l.labels.push_back(kg.row_nodes[r]);
          l.values.push_back(*v);
        }
        return l;
      }
      case Op::slice: {
        // (slice list from to "inclusive"|"exclusive"), by table row order.
        arity(f, 4);
        const LabeledList l = list(f.args[0]);
        int a = resolve_row(f.args[1]), b = resolve_row(f.args[2]);
        if (a > b) std::swap(a, b);
        const std::string mode = str(f.args[3]);
        if (mode != "inclusive" && mode != "exclusive") throw Error("bad slice mode " + mode);
        if (mode == "exclusive") {
          ++a;
          --b;
        }
        LabeledList out;
        for (size_t i = 0; i < l.labels.size(); ++i) {
          const int r = *kg.row_of(l.labels[i]);
          if (r >= a && r <= b) {
            out.labels.push_back(l.labels[i]);
            out.values.push_back(l.values[i]);
          }
        }
        return out;
      }
      case Op::max:
      case Op::min: {
        arity(f, 1);
        const auto l = nonempty(list(f.args[0]), op_name(f.op).data());
        return f.op == Op::max ? *std::max_element(l.values.begin(), l.values.end())
                               : *std::min_element(l.values.begin(), l.values.end());
      }
      case Op::sum: {
        arity(f, 1);
        const auto l = list(f.args[0]);
        return std::accumulate(l.values.begin(), l.values.end(), 0.0);
      }
      case Op::mean: {
        arity(f, 1);
        const auto l = nonempty(list(f.args[0]), "mean");
        return std::accumulate(l.values.begin(), l.values.end(), 0.0) / l.values.size();
      }
      case Op::median: {
        arity(f, 1);
        auto v = nonempty(list(f.args[0]), "median").values;
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
      }
      case Op::size: {
        arity(f, 1);
        return static_cast<double>(list(f.args[0]).values.size());
      }
      case Op::argmax:
      case Op::argmin: {
        // First occurrence in row order on ties.
        arity(f, 1);
        const auto l = nonempty(list(f.args[0]), op_name(f.op).data());
        size_t best = 0;
        for (size_t i = 1; i < l.values.size(); ++i)
          if (f.op == Op::argmax ? l.values[i] > l.values[best] : l.values[i] < l.values[best])
            best = i;
        return l.labels[best];
      }
      case Op::nth_from: {
        // (nth_from "top"|"bottom" n list): n-th largest or smallest value.
        arity(f, 3);
        const std::string dir = str(f.args[0]);
        const int n = static_cast<int>(num(f.args[1]));
        auto v = list(f.args[2]).values;
        if (n < 1 || n > static_cast<int>(v.size())) unavailable("not enough values");
        if (dir == "top") std::sort(v.begin(), v.end(), std::greater<>());
        else if (dir == "bottom") std::sort(v.begin(), v.end());
        else throw Error("bad nth_from direction " + dir);
        return v[n - 1];
      }
      case Op::diff: return arith(f, [](double a, double b) { return a - b; });
      case Op::add: return arith(f, [](double a, double b) { return a + b; });
      case Op::ratio: {
        arity(f, 2);
        const double a = num(f.args[0]), b = num(f.args[1]);
        if (b == 0) unavailable("ratio with zero denominator");
        return a / b;
      }
      case Op::abs: {
        arity(f, 1);
        return std::fabs(num(f.args[0]));
      }
      case Op::count_where:
      case Op::majority_where: {
        // (count_where list op threshold)
        arity(f, 3);
        const auto l = list(f.args[0]);
        const std::string op = str(f.args[1]);
        const double thr = num(f.args[2]);
        size_t n = 0;
        for (double v : l.values) n += apply_cmp(op, v, thr);
        if (f.op == Op::count_where) return static_cast<double>(n);
        if (l.values.empty()) unavailable("majority over an empty range");
        return 2 * n > l.values.size();
      }
      case Op::compare: {
        arity(f, 3);
        return apply_cmp(str(f.args[0]), num(f.args[1]), num(f.args[2]));
      }
      case Op::monotonic_increasing: {
        arity(f, 1);
        const auto l = nonempty(list(f.args[0]), "monotonicity");
        for (size_t i = 1; i < l.values.size(); ++i) {
          if (opt.strict_monotonic ? l.values[i] <= l.values[i - 1]
                                   : l.values[i] < l.values[i - 1])
            return false;
        }
        return true;
      }
      case Op::strictly_dominates: {
        // (strictly_dominates op a b): a op b on every row both lists share.
        arity(f, 3);
        const std::string op = str(f.args[0]);
        const auto a = list(f.args[1]), b = list(f.args[2]);
        const auto both = zip(a, b, [](double x, double y) { return x - y; });
        if (both.values.empty()) unavailable("no shared rows");
        for (size_t i = 0; i < both.labels.size(); ++i) {
          const double x = a.values[std::find(a.labels.begin(), a.labels.end(), both.labels[i]) -
                                    a.labels.begin()];
          const double y = b.values[std::find(b.labels.begin(), b.labels.end(), both.labels[i]) -
                                    b.labels.begin()];
          if (!apply_cmp(op, x, y)) return false;
        }
        return true;
      }
      case Op::max_gap_except: {
        // (max_gap_except list r1 r2): largest |a - b| over pairs other than {r1, r2}.
        arity(f, 3);
        const auto l = list(f.args[0]);
        const std::string r1 = str(f.args[1]), r2 = str(f.args[2]);
        bool any = false;
        double best = 0;
        for (size_t i = 0; i < l.values.size(); ++i)
          for (size_t j = i + 1; j < l.values.size(); ++j) {
            const bool excluded = (l.labels[i] == r1 && l.labels[j] == r2) ||
                                  (l.labels[i] == r2 && l.labels[j] == r1);
            if (excluded) continue;
            best = any ? std::max(best, std::fabs(l.values[i] - l.values[j]))
                       : std::fabs(l.values[i] - l.values[j]);
            any = true;
          }
        if (!any) unavailable("no other pairs");
        return best;
      }
    }
    throw Error("unknown logical form operator");
  }
};

}  // namespace

Value evaluate(const LogicalForm& lf, const KnowledgeGraph& kg, const ExecOptions& opt) {
  return Exec{kg, opt}.eval(lf);
}

Answer execute(const LogicalForm& lf, const KnowledgeGraph& kg, const ExecOptions& opt) {
  const Value v = evaluate(lf, kg, opt);
  if (const double* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) throw AnswerUnavailable("non-finite result");
    return Answer::of_number(*d);
  }
  if (const bool* b = std::get_if<bool>(&v)) return Answer::yes_no(*b);
  if (const auto* s = std::get_if<std::string>(&v)) return Answer::of_text(*s);
  throw Error("logical form evaluates to a list, not an answer: " + lf.to_sexpr());
}

}  // namespace plotqa::tableqa
