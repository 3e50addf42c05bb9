#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "plotqa/answer.hpp"
#include "plotqa/common.hpp"
#include "plotqa/corpus.hpp"
#include "plotqa/plotgen.hpp"
#include "plotqa/templates.hpp"

namespace plotqa::qgen {

struct QuestionInstance {
  int template_id = 0;
  Category category = Category::structural;
  AnswerType answer_type = AnswerType::yes_no;
  std::string text;
  Bindings bindings;
  Answer gold;
};

// Expected questions per plot for each (category, answer type) cell. The
// expectation of a cell is split evenly over its applicable templates.
struct TemplateWeights {
  double questions_per_plot = 40;
  std::array<double, 3> category_share{0.043, 0.137, 0.820};
  // [category][answer type], rows sum to 1.
  std::array<std::array<double, 3>, 3> answer_share{{
      {0.3699, 0.6301, 0.0},
      {0.0519, 0.1852, 0.7629},
      {0.0205, 0.1592, 0.8203},
  }};
};
TemplateWeights default_weights();
// JSON: {"questions_per_plot": q, "category_share": [..3], "answer_share": [[..3] x3]}.
TemplateWeights weights_from_json(std::string_view json);

std::vector<QuestionInstance> instantiate(const plotgen::PlotSpec& spec,
                                          const std::vector<Template>& templates,
                                          uint64_t seed,
                                          const TemplateWeights& weights = default_weights(),
                                          const Lexicon& lex = default_lexicon());

// Draw random bindings for a template on this plot; nullopt when the plot
// cannot support the template (e.g. too few rows for a constraint).
std::optional<Bindings> sample_bindings(const Template& t, const plotgen::PlotSpec& spec,
                                        Rng& rng);

// Throws Error for templates that do not apply to the plot.
Answer gold_answer(const Template& t, const Bindings& b, const plotgen::PlotSpec& spec);

Decorations decorations_for(const corpus::PlotData& d);

// Crossings between distinct series polylines sampled at shared x positions.
// Touching at a vertex does not count.
int count_line_crossings(const std::vector<std::vector<double>>& series);

// Human-readable legend position, as used in answers.
std::string legend_position_answer(plotgen::LegendPosition p);

}  // namespace plotqa::qgen
