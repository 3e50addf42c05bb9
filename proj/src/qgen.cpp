#include "plotqa/qgen.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"
#include <set>

#include "plotqa/tableqa.hpp"

namespace plotqa::qgen {

using plotgen::PlotSpec;
using plotgen::PlotType;

TemplateWeights default_weights() { return {}; }

TemplateWeights weights_from_json(std::string_view text) {
  TemplateWeights w;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("template weights: ") + e.what());
  }
  if (j.contains("questions_per_plot")) w.questions_per_plot = j["questions_per_plot"].get<double>();
  if (j.contains("category_share")) {
    const auto v = j["category_share"].get<std::vector<double>>();
    if (v.size() != 3) throw SchemaError("category_share needs 3 entries");
    std::copy(v.begin(), v.end(), w.category_share.begin());
  }
  if (j.contains("answer_share")) {
    const auto v = j["answer_share"].get<std::vector<std::vector<double>>>();
    if (v.size() != 3) throw SchemaError("answer_share needs 3 rows");
    for (int c = 0; c < 3; ++c) {
      if (v[c].size() != 3) throw SchemaError("answer_share rows need 3 entries");
      std::copy(v[c].begin(), v[c].end(), w.answer_share[c].begin());
    }
  }
  if (w.questions_per_plot < 0) throw SchemaError("questions_per_plot must be >= 0");
  for (double x : w.category_share)
    if (x < 0) throw SchemaError("shares must be >= 0");
  return w;
}

Decorations decorations_for(const corpus::PlotData& d) {
  return {std::string(legend_connector(d)), std::string(year_prefix(d))};
}

int count_line_crossings(const std::vector<std::vector<double>>& series) {
  int n = 0;
  for (size_t a = 0; a < series.size(); ++a)
    for (size_t b = a + 1; b < series.size(); ++b) {
      const size_t len = std::min(series[a].size(), series[b].size());
      for (size_t i = 0; i + 1 < len; ++i) {
        const double d0 = series[a][i] - series[b][i];
        const double d1 = series[a][i + 1] - series[b][i + 1];
        if (d0 * d1 < 0) ++n;
      }
    }
  return n;
}

std::string legend_position_answer(plotgen::LegendPosition p) { return std::string(to_string(p)); }

namespace {

double round_sig2(double v) {
  if (v == 0) return 0;
  const double mag = std::pow(10.0, std::floor(std::log10(std::fabs(v))) - 1);
  return std::round(v / mag) * mag;
}

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(v.size()) - 1))];
}

// Legend labels absent from the plot, for negative legend questions.
std::vector<std::string> legend_distractors(const corpus::PlotData& d) {
  const std::set<std::string> present = [&] {
    std::set<std::string> s;
    for (const auto& ser : d.series) s.insert(ser.legend_label);
    return s;
  }();
  const bool x_years = d.x_plural == corpus::years_kind().plural;
  const corpus::EntityKind* kind =
      x_years ? corpus::find_entity_kind(d.indicator.plural_entity_phrase) : &corpus::years_kind();
  std::vector<std::string> out;
  if (!kind) return out;
  for (const auto& n : kind->names)
    if (!present.count(n)) out.push_back(n);
  return out;
}

const std::vector<double>& values_of(const corpus::PlotData& d, const std::string& label) {
  for (const auto& s : d.series)
    if (s.legend_label == label) return s.values;
  throw Error("no series '" + label + "'");
}

}  // namespace

std::optional<Bindings> sample_bindings(const Template& t, const PlotSpec& spec, Rng& rng) {
  const auto& d = spec.data;
  const int nrows = static_cast<int>(d.x_categories.size());
  const int nseries = static_cast<int>(d.series.size());
  Bindings b;
  if (t.has_slot("Y")) b["Y"] = d.indicator.unit_phrase;
  if (t.has_slot("XP")) b["XP"] = d.x_plural;
  if (t.has_slot("XS")) b["XS"] = d.x_singular;
  if (t.has_slot("FIG")) b["FIG"] = std::string(figure_name(spec.plot_type));
  if (t.has_slot("TITLE")) b["TITLE"] = d.title;
  if (t.has_slot("INCL")) b["INCL"] = rng.bernoulli(0.5) ? "inclusive" : "exclusive";

  // Distinct legend labels for L, L1..L4.
  std::vector<int> order(nseries);
  for (int i = 0; i < nseries; ++i) order[i] = i;
  rng.shuffle(order);
  int used = 0;
  for (const char* slot : {"L", "L1", "L2", "L3", "L4"}) {
    if (!t.has_slot(slot)) continue;
    if (used >= nseries) return std::nullopt;
    b[slot] = d.series[order[used++]].legend_label;
  }

  if (t.has_slot("T1")) {
    if (nrows < 2) return std::nullopt;
    int i = static_cast<int>(rng.uniform_int(0, nrows - 1));
    int j = static_cast<int>(rng.uniform_int(0, nrows - 2));
    if (j >= i) ++j;
    if (t.id == 65) {  // consecutive ticks
      i = static_cast<int>(rng.uniform_int(0, nrows - 2));
      j = i + 1;
    }
    if (t.id == 57) {  // ordered range with room inside when exclusive
      const int gap = b["INCL"] == "exclusive" ? 2 : 1;
      if (nrows - 1 < gap) return std::nullopt;
      i = static_cast<int>(rng.uniform_int(0, nrows - 1 - gap));
      j = static_cast<int>(rng.uniform_int(i + gap, nrows - 1));
    }
    b["T1"] = d.x_categories[i];
    if (t.has_slot("T2")) b["T2"] = d.x_categories[j];
  }

  if (t.has_slot("ORD")) {
    const bool over_series = t.id >= 19 && t.id <= 22;
    const int n = over_series ? nseries : nrows;
    b["ORD"] = ordinal(static_cast<int>(rng.uniform_int(1, n)));
  }

  if (t.has_slot("N")) {
    std::vector<double> v = t.has_slot("L") ? values_of(d, b["L"]) : d.series[0].values;
    std::sort(v.begin(), v.end());
    const double q = std::array{0.25, 0.5, 0.75}[rng.uniform_int(0, 2)];
    const double pos = q * (v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double x = v[lo] + (v[hi] - v[lo]) * (pos - lo);
    b["N"] = format_threshold(round_sig2(x));
  }

  if (t.has_slot("LQ")) {
    const auto distractors = legend_distractors(d);
    if (distractors.empty() || rng.bernoulli(0.5))
      b["LQ"] = d.series[rng.uniform_int(0, nseries - 1)].legend_label;
    else
      b["LQ"] = pick(distractors, rng);
  }
  return b;
}

Answer gold_answer(const Template& t, const Bindings& b, const PlotSpec& spec) {
  const auto& d = spec.data;
  const int nrows = static_cast<int>(d.x_categories.size());
  const int nseries = static_cast<int>(d.series.size());
  if (!t.applies_to(spec.plot_type, nseries, nrows))
    throw Error("template " + std::to_string(t.id) + " does not apply to this plot");
  const bool bar = plotgen::is_bar(spec.plot_type);
  auto ord = [&] {
    const auto n = parse_ordinal(b.at("ORD"));
    if (!n) throw Error("bad ordinal " + b.at("ORD"));
    return *n;
  };
  auto axis_max = [&] {
    double m = 0;
    for (const auto& s : d.series)
      for (double v : s.values) m = std::max(m, v);
    return m;
  };
  switch (t.id) {
    case 1: {
      for (const auto& s : d.series)
        for (double v : s.values)
          if (v == 0) return Answer::yes_no(true);
      return Answer::yes_no(false);
    }
    case 2: return Answer::yes_no(spec.style.grid);
    case 3: return Answer::of_text(legend_position_answer(spec.style.legend_position));
    case 4: return Answer::of_number(nseries);
    case 5:
      return Answer::of_text(plotgen::legend_is_horizontal(spec.style.legend_position)
                                 ? "horizontal"
                                 : "vertical");
    case 6: return Answer::of_number(nrows);
    case 7: return Answer::of_number(bar ? nseries * nrows : nseries);
    case 8: return Answer::of_number(nseries);
    case 9: return Answer::of_number(nrows);
    case 10:
    case 11: return Answer::yes_no(true);
    case 12:
    case 13:
    case 14:
    case 15: return Answer::of_number(nseries);
    case 16: return Answer::yes_no(spec.plot_type == PlotType::hbar);
    case 17: {
      std::vector<std::vector<double>> lines;
      for (const auto& s : d.series) lines.push_back(s.values);
      return Answer::of_number(count_line_crossings(lines));
    }
    case 18: return Answer::yes_no(true);
    case 19:
    case 21: return Answer::of_text(d.series[ord() - 1].legend_label);
    case 20:
    case 22: return Answer::of_text(d.series[nseries - ord()].legend_label);
    case 23:
    case 24: return Answer::of_text(d.x_categories[ord() - 1]);
    case 26: return Answer::of_number(plotgen::nice_value_axis(axis_max()).step);
    case 27:
      return Answer::yes_no(spec.style.tick_notation == plotgen::TickNotation::scientific_e);
    case 28: return Answer::of_text(d.title);
    case 29: {
      for (const auto& s : d.series)
        if (s.legend_label == b.at("LQ")) return Answer::yes_no(true);
      return Answer::yes_no(false);
    }
    case 30: return Answer::of_text(spec.plot_type == PlotType::hbar ? d.y_label : d.x_label);
    case 31: return Answer::of_text(spec.plot_type == PlotType::hbar ? d.x_label : d.y_label);
    case 32: return Answer::of_number(0);
    default: break;
  }
  const auto lf = tableqa::logical_form_for(t.id, b);
  if (!lf) throw Error("template " + std::to_string(t.id) + " has no evaluator");
  const auto kg = tableqa::build_kg(plotgen::gold_table(d));
  try {
    return tableqa::execute(*lf, kg);
  } catch (const AnswerUnavailable& e) {
    return Answer::unavailable(e.what());
  }
}

std::vector<QuestionInstance> instantiate(const PlotSpec& spec,
                                          const std::vector<Template>& templates,
                                          uint64_t seed, const TemplateWeights& weights,
                                          const Lexicon& lex) {
  if (templates.empty()) throw Error("instantiate: no templates");
  const auto& d = spec.data;
  const int nrows = static_cast<int>(d.x_categories.size());
  const int nseries = static_cast<int>(d.series.size());
  Rng rng(seed);

  std::array<std::array<int, 3>, 3> applicable{};
  for (const auto& t : templates)
    if (t.applies_to(spec.plot_type, nseries, nrows))
      ++applicable[static_cast<int>(t.category)][static_cast<int>(t.answer_type)];

  const Decorations dec = decorations_for(d);
  std::vector<QuestionInstance> out;
  std::set<std::string> seen;
  for (const auto& t : templates) {
    if (!t.applies_to(spec.plot_type, nseries, nrows)) continue;
    const int c = static_cast<int>(t.category), a = static_cast<int>(t.answer_type);
    const double lambda = weights.questions_per_plot * weights.category_share[c] *
                          weights.answer_share[c][a] / applicable[c][a];
    int count = static_cast<int>(std::floor(lambda));
    if (rng.bernoulli(lambda - count)) ++count;
    for (int k = 0, attempts = 0; k < count && attempts < 4 * count + 4; ++attempts) {
      auto b = sample_bindings(t, spec, rng);
      if (!b) break;
      QuestionInstance q;
      q.template_id = t.id;
      q.category = t.category;
      q.answer_type = t.answer_type;
      q.text = paraphrase(t, *b, dec, lex);
      if (seen.count(q.text)) continue;
      q.gold = gold_answer(t, *b, spec);
      if (!q.gold.available()) continue;
      q.bindings = std::move(*b);
      seen.insert(q.text);
      out.push_back(std::move(q));
      ++k;
    }
  }
  return out;
}

}  // namespace plotqa::qgen
