#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plotqa/plotgen.hpp"

namespace plotqa::qgen {

enum class Category { structural, data_retrieval, reasoning };
enum class AnswerType { yes_no, fixed_vocab, open_vocab };
inline constexpr std::array kCategories = {Category::structural, Category::data_retrieval,
                                           Category::reasoning};
inline constexpr std::array kAnswerTypes = {AnswerType::yes_no, AnswerType::fixed_vocab,
                                            AnswerType::open_vocab};
std::string_view to_string(Category c);
std::string_view to_string(AnswerType a);
Category category_from_string(std::string_view s);
AnswerType answer_type_from_string(std::string_view s);

// Slot -> value. Decorations ({OF}, {YR}) are not bindings.
using Bindings = std::map<std::string, std::string>;

struct Token {
  bool is_slot = false;
  std::string text;  // literal text or slot name
};

struct Applicability {
  std::set<plotgen::PlotType> plot_types;  // empty = all
  int min_series = 1;
  int max_series = 99;
  int min_rows = 1;
};

struct Template {
  int id = 0;
  Category category = Category::structural;
  AnswerType answer_type = AnswerType::yes_no;
  std::string pattern;
  std::vector<Token> tokens;
  Applicability applicability;

  std::set<std::string> slots() const;  // binding slots only
  bool has_slot(std::string_view name) const;
  bool uses_legend() const;  // any of L, L1..L4
  bool applies_to(plotgen::PlotType type, int series, int rows) const;
};

inline constexpr int kNumTemplates = 74;

std::vector<Token> tokenize_pattern(std::string_view pattern);
// Parse the template file; ids must be 1..74 in order.
std::vector<Template> parse_templates(std::string_view text);
const std::vector<Template>& default_templates();
const Template& template_by_id(int id);

bool is_decoration(std::string_view slot);
bool is_legend_slot(std::string_view slot);

// Vocabulary helpers shared by the generator and the parser.
std::string ordinal(int n);  // 1 -> "1st"
std::optional<int> parse_ordinal(std::string_view s);
std::string format_threshold(double v);
std::string_view figure_name(plotgen::PlotType t);  // "bar", "line", "dot-line"
// "in" for place-like and year legends, "of" otherwise.
std::string_view legend_connector(const corpus::PlotData& d);
// "the year " when the categorical axis holds years.
std::string_view year_prefix(const corpus::PlotData& d);

struct Decorations {
  std::string of = "of";
  std::string yr;
};

// Substitute bindings and decorations. Throws Error naming a missing slot.
std::string fill(const Template& t, const Bindings& b, const Decorations& dec);

// All ways the text can be split into the template's tokens. Repeated slots
// are bound consistently; vocabulary slots only take values from their
// vocabulary. Decorations are matched but dropped from the result.
std::vector<Bindings> match(const Template& t, std::string_view text, size_t limit = 256);

// Paraphrase lexicon: "raw | paraphrase" entries; {L} inside an entry stands
// for a legend label.
struct LexiconEntry {
  std::string raw;
  std::string paraphrase;
};
using Lexicon = std::vector<LexiconEntry>;
Lexicon parse_lexicon(std::string_view text);
const Lexicon& default_lexicon();

// Fill the pattern and apply the lexicon to the filled text.
std::string paraphrase(const Template& t, const Bindings& b, const Decorations& dec,
                       const Lexicon& lex);
std::string apply_lexicon(std::string text, const Bindings& b, const Lexicon& lex);
// Inverse of apply_lexicon, used before parsing.
std::string unapply_lexicon(std::string text, const Lexicon& lex);

}  // namespace plotqa::qgen
