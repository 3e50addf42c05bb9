#include "plotqa/templates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "embedded_data.hpp"
#include "plotqa/common.hpp"
#include "plotqa/corpus.hpp"

namespace plotqa::qgen {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::structural: return "structural";
    case Category::data_retrieval: return "data_retrieval";
    case Category::reasoning: return "reasoning";
  }
  return "structural";
}
std::string_view to_string(AnswerType a) {
  switch (a) {
    case AnswerType::yes_no: return "yes_no";
    case AnswerType::fixed_vocab: return "fixed_vocab";
    case AnswerType::open_vocab: return "open_vocab";
  }
  return "yes_no";
}
Category category_from_string(std::string_view s) {
  for (auto c : kCategories)
    if (to_string(c) == s) return c;
  throw SchemaError("unknown category '" + std::string(s) + "'");
}
AnswerType answer_type_from_string(std::string_view s) {
  for (auto a : kAnswerTypes)
    if (to_string(a) == s) return a;
  throw SchemaError("unknown answer type '" + std::string(s) + "'");
}

namespace {

const std::set<std::string, std::less<>> kSlotNames = {
    "Y", "XP", "XS", "L", "L1", "L2", "L3", "L4", "LQ", "T1", "T2",
    "ORD", "N", "FIG", "TITLE", "INCL", "OF", "YR"};

const std::vector<std::string>& vocabulary(std::string_view slot) {
  static const std::vector<std::string> empty;
  static const std::vector<std::string> of = {"of", "in"};
  static const std::vector<std::string> yr = {"the year ", ""};
  static const std::vector<std::string> fig = {"bar", "line", "dot-line"};
  static const std::vector<std::string> incl = {"inclusive", "exclusive"};
  static const std::vector<std::string> ord = [] {
    std::vector<std::string> v;
    for (int i = 1; i <= corpus::kMaxCategories; ++i) v.push_back(ordinal(i));
    return v;
  }();
  static const std::vector<std::string> plurals = [] {
    std::vector<std::string> v = {corpus::years_kind().plural};
    for (const auto& k : corpus::entity_kinds()) v.push_back(k.plural);
    return v;
  }();
  static const std::vector<std::string> singulars = [] {
    std::vector<std::string> v = {corpus::years_kind().singular};
    for (const auto& k : corpus::entity_kinds()) v.push_back(k.singular);
    return v;
  }();
  if (slot == "OF") return of;
  if (slot == "YR") return yr;
  if (slot == "FIG") return fig;
  if (slot == "INCL") return incl;
  if (slot == "ORD") return ord;
  if (slot == "XP") return plurals;
  if (slot == "XS") return singulars;
  return empty;
}

bool is_vocab_slot(std::string_view slot) { return !vocabulary(slot).empty(); }

bool valid_free_value(std::string_view slot, std::string_view v) {
  if (v.empty()) return false;
  if (slot == "N") return v.find(' ') == std::string_view::npos && parse_number(v).has_value();
  return true;
}

Applicability parse_applicability(std::string_view s, int line) {
  Applicability a;
  const std::string text = trim(s);
  if (text == "any") return a;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(' ', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SchemaError("bad applicability '" + item + "'", line);
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "plot") {
      for (const auto& t : split(value, ',')) a.plot_types.insert(plotgen::plot_type_from_string(t));
    } else if (key == "series" || key == "rows") {
      const bool plus = !value.empty() && value.back() == '+';
      const auto n = parse_number(plus ? value.substr(0, value.size() - 1) : value);
      if (!n) throw SchemaError("bad applicability count '" + item + "'", line);
      if (key == "rows") {
        a.min_rows = static_cast<int>(*n);
      } else {
        a.min_series = static_cast<int>(*n);
        a.max_series = plus ? 99 : a.min_series;
      }
    } else {
      throw SchemaError("unknown applicability key '" + key + "'", line);
    }
  }
  return a;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

bool is_decoration(std::string_view slot) { return slot == "OF" || slot == "YR"; }
bool is_legend_slot(std::string_view slot) {
  return slot == "L" || slot == "L1" || slot == "L2" || slot == "L3" || slot == "L4";
}

std::set<std::string> Template::slots() const {
  std::set<std::string> out;
  for (const auto& t : tokens)
    if (t.is_slot && !is_decoration(t.text)) out.insert(t.text);
  return out;
}
bool Template::has_slot(std::string_view name) const {
  for (const auto& t : tokens)
    if (t.is_slot && t.text == name) return true;
  return false;
}
bool Template::uses_legend() const {
  for (const auto& t : tokens)
    if (t.is_slot && is_legend_slot(t.text)) return true;
  return false;
}
bool Template::applies_to(plotgen::PlotType type, int series, int rows) const {
  const auto& a = applicability;
  if (!a.plot_types.empty() && !a.plot_types.count(type)) return false;
  return series >= a.min_series && series <= a.max_series && rows >= a.min_rows;
}

std::vector<Token> tokenize_pattern(std::string_view pattern) {
  std::vector<Token> out;
  size_t pos = 0;
  while (pos < pattern.size()) {
    const size_t open = pattern.find('{', pos);
    if (open == std::string_view::npos) {
      out.push_back({false, std::string(pattern.substr(pos))});
      break;
    }
    if (open > pos) out.push_back({false, std::string(pattern.substr(pos, open - pos))});
    const size_t close = pattern.find('}', open);
    if (close == std::string_view::npos) throw SchemaError("unterminated slot in pattern");
    const std::string name(pattern.substr(open + 1, close - open - 1));
    if (!kSlotNames.count(name)) throw SchemaError("unknown slot {" + name + "}");
    out.push_back({true, name});
    pos = close + 1;
  }
  return out;
}

std::vector<Template> parse_templates(std::string_view text) {
  std::vector<Template> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '|');
    if (f.size() != 5) throw SchemaError("expected 5 fields, got " + std::to_string(f.size()), line_no);
    Template t;
    const auto id = parse_number(trim(f[0]));
    if (!id) throw SchemaError("field 'id' is not a number", line_no);
    t.id = static_cast<int>(*id);
    if (t.id != static_cast<int>(out.size()) + 1)
      throw SchemaError("template ids must be consecutive from 1", line_no);
    try {
      t.category = category_from_string(trim(f[1]));
      t.answer_type = answer_type_from_string(trim(f[2]));
      t.pattern = trim(f[3]);
      t.tokens = tokenize_pattern(t.pattern);
    } catch (const SchemaError& e) {
      throw SchemaError(e.what(), line_no);
    }
    t.applicability = parse_applicability(f[4], line_no);
    if (t.category == Category::structural && t.answer_type == AnswerType::open_vocab)
      throw SchemaError("structural templates cannot be open vocabulary", line_no);
    out.push_back(std::move(t));
  }
  return out;
}

const std::vector<Template>& default_templates() {
  static const std::vector<Template> t = parse_templates(embedded::templates_txt);
  return t;
}

const Template& template_by_id(int id) {
  const auto& all = default_templates();
  if (id < 1 || id > static_cast<int>(all.size()))
    throw Error("no template with id " + std::to_string(id));
  return all[id - 1];
}

std::string ordinal(int n) {
  const int mod100 = n % 100, mod10 = n % 10;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    if (mod10 == 1) suffix = "st";
    else if (mod10 == 2) suffix = "nd";
    else if (mod10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

std::optional<int> parse_ordinal(std::string_view s) {
  if (s.size() < 3) return std::nullopt;
  const auto n = parse_number(s.substr(0, s.size() - 2));
  if (!n || *n < 1 || *n != std::floor(*n)) return std::nullopt;
  const int v = static_cast<int>(*n);
  if (ordinal(v) != s) return std::nullopt;
  return v;
}

std::string format_threshold(double v) {
  char buf[64];
  if (v == std::floor(v) && std::fabs(v) < 1e16)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string_view figure_name(plotgen::PlotType t) {
  switch (t) {
    case plotgen::PlotType::vbar:
    case plotgen::PlotType::hbar: return "bar";
    case plotgen::PlotType::line: return "line";
    case plotgen::PlotType::dotline: return "dot-line";
  }
  return "bar";
}

std::string_view legend_connector(const corpus::PlotData& d) {
  // The legend holds entities when the categorical axis holds years.
  const std::string legend_kind =
      d.x_plural == corpus::years_kind().plural ? d.indicator.plural_entity_phrase : "years";
  static const std::set<std::string, std::less<>> places = {"years", "countries", "cities",
                                                            "states", "districts"};
  return places.count(legend_kind) ? "in" : "of";
}

std::string_view year_prefix(const corpus::PlotData& d) {
  return d.x_plural == corpus::years_kind().plural ? "the year " : "";
}

std::string fill(const Template& t, const Bindings& b, const Decorations& dec) {
  std::string out;
  for (const auto& tok : t.tokens) {
    if (!tok.is_slot) {
      out += tok.text;
    } else if (tok.text == "OF") {
      out += dec.of;
    } else if (tok.text == "YR") {
      out += dec.yr;
    } else {
      const auto it = b.find(tok.text);
      if (it == b.end())
        throw Error("template " + std::to_string(t.id) + ": unfilled slot {" + tok.text + "}");
      out += it->second;
    }
  }
  return out;
}

namespace {

struct Matcher {
  const std::vector<Token>& tokens;
  std::string_view text;
  size_t limit;
  std::vector<Bindings> results;
  Bindings current;

  void run(size_t i, size_t pos) {
    if (results.size() >= limit) return;
    if (i == tokens.size()) {
      if (pos == text.size()) {
        Bindings b;
        for (const auto& [k, v] : current)
          if (!is_decoration(k)) b[k] = v;
        results.push_back(std::move(b));
      }
      return;
    }
    const Token& tok = tokens[i];
    const std::string_view rest = text.substr(pos);
    if (!tok.is_slot) {
      if (rest.substr(0, tok.text.size()) == tok.text) run(i + 1, pos + tok.text.size());
      return;
    }
    const auto bound = current.find(tok.text);
    if (bound != current.end()) {
      if (rest.substr(0, bound->second.size()) == bound->second)
        run(i + 1, pos + bound->second.size());
      return;
    }
    auto try_value = [&](std::string_view value) {
      current[tok.text] = std::string(value);
      run(i + 1, pos + value.size());
      current.erase(tok.text);
    };
    if (is_vocab_slot(tok.text)) {
      for (const auto& v : vocabulary(tok.text))
        if (rest.substr(0, v.size()) == v) try_value(v);
      return;
    }
    // Free slot: candidate ends are positions where the next literal starts.
    if (i + 1 == tokens.size()) {
      if (valid_free_value(tok.text, rest)) try_value(rest);
      return;
    }
    const Token& next = tokens[i + 1];
    for (size_t len = 1; len <= rest.size(); ++len) {
      if (!next.is_slot && rest.substr(len, next.text.size()) != next.text) continue;
      const std::string_view value = rest.substr(0, len);
      if (valid_free_value(tok.text, value)) try_value(value);
      if (results.size() >= limit) return;
    }
  }
};

}  // namespace

std::vector<Bindings> match(const Template& t, std::string_view text, size_t limit) {
  Matcher m{t.tokens, text, limit, {}, {}};
  m.run(0, 0);
  std::sort(m.results.begin(), m.results.end());
  m.results.erase(std::unique(m.results.begin(), m.results.end()), m.results.end());
  return m.results;
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '|');
    if (f.size() != 2) throw SchemaError("expected 'raw | paraphrase'", line_no);
    LexiconEntry e{trim(f[0]), trim(f[1])};
    if (e.raw.empty() || e.paraphrase.empty()) throw SchemaError("empty lexicon field", line_no);
    const bool raw_l = e.raw.find("{L}") != std::string::npos;
    const bool para_l = e.paraphrase.find("{L}") != std::string::npos;
    if (raw_l != para_l) throw SchemaError("{L} must appear on both sides or neither", line_no);
    if (para_l && (starts_with(e.paraphrase, "{L}") ||
                   (e.paraphrase.size() >= 3 &&
                    e.paraphrase.compare(e.paraphrase.size() - 3, 3, "{L}") == 0)))
      throw SchemaError("{L} must be surrounded by fixed text in a paraphrase", line_no);
    lex.push_back(std::move(e));
  }
  // Longer entries win over entries they contain.
  std::stable_sort(lex.begin(), lex.end(), [](const auto& a, const auto& b) {
    return a.raw.size() > b.raw.size();
  });
  return lex;
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = parse_lexicon(embedded::lexicon_txt);
  return lex;
}

std::string apply_lexicon(std::string text, const Bindings& b, const Lexicon& lex) {
  for (const auto& e : lex) {
    if (e.raw.find("{L}") == std::string::npos) {
      text = replace_all(std::move(text), e.raw, e.paraphrase);
      continue;
    }
    for (const auto& [slot, value] : b) {
      if (!is_legend_slot(slot)) continue;
      text = replace_all(std::move(text), replace_all(e.raw, "{L}", value),
                         replace_all(e.paraphrase, "{L}", value));
    }
  }
  return text;
}

std::string unapply_lexicon(std::string text, const Lexicon& lex) {
  for (const auto& e : lex) {
    const size_t hole = e.paraphrase.find("{L}");
    if (hole == std::string::npos) {
      text = replace_all(std::move(text), e.paraphrase, e.raw);
      continue;
    }
    const std::string prefix = e.paraphrase.substr(0, hole);
    const std::string suffix = e.paraphrase.substr(hole + 3);
    size_t pos = 0;
    while ((pos = text.find(prefix, pos)) != std::string::npos) {
      const size_t start = pos + prefix.size();
      const size_t end = text.find(suffix, start);
      if (end == std::string::npos || end == start) break;
      const std::string label = text.substr(start, end - start);
      const std::string raw = replace_all(e.raw, "{L}", label);
      text.replace(pos, end + suffix.size() - pos, raw);
      pos += raw.size();
    }
  }
  return text;
}

std::string paraphrase(const Template& t, const Bindings& b, const Decorations& dec,
                       const Lexicon& lex) {
  return apply_lexicon(fill(t, b, dec), b, lex);
}

}  // namespace plotqa::qgen
