#include "plotqa/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "plotqa/qgen.hpp"
#include "plotqa/tableqa.hpp"

namespace plotqa::hybrid {

using detsim::Detection;
using plotgen::ElementClass;
using plotgen::LegendPosition;
using plotgen::PlotType;
using qgen::AnswerType;
using qgen::Category;

std::string_view to_string(Branch b) {
  return b == Branch::classification ? "classification" : "pipeline";
}

std::string_view to_string(System s) {
  switch (s) {
    case System::hybrid: return "hybrid";
    case System::pipeline_only: return "pipeline";
    case System::classification_only: return "classification";
  }
  return "hybrid";
}

System system_from_string(std::string_view s) {
  if (s == "hybrid") return System::hybrid;
  if (s == "pipeline") return System::pipeline_only;
  if (s == "classification") return System::classification_only;
  throw Error("unknown system '" + std::string(s) + "'");
}

namespace {

bool classification_template(const qgen::Template& t) {
  return t.category == Category::structural || t.answer_type == AnswerType::yes_no;
}

std::optional<int> ord_of(const qgen::Bindings& b) {
  const auto it = b.find("ORD");
  if (it == b.end()) return std::nullopt;
  return qgen::parse_ordinal(it->second);
}

Answer missing(const std::string& what) { return Answer::unavailable(what + " not detected"); }

}  // namespace

Route route(std::string_view question) {
  Route r;
  try {
    const auto p = tableqa::parse(question);
    const auto& t = qgen::template_by_id(p.template_id);
    r.template_id = t.id;
    r.branch = classification_template(t) ? Branch::classification : Branch::pipeline;
    r.reason = std::string(qgen::to_string(t.category)) + "/" + std::string(qgen::to_string(t.answer_type));
  } catch (const UnparseableQuestion&) {
    r.reason = "unparseable";
  }
  return r;
}

// ---- PlotView ------------------------------------------------------------

PlotView::PlotView(detsim::DetectionSet d) : d_(std::move(d)) {
  ex_ = sie::extract(d_);
  categories_ = sie::associate_ticks(d_, value_vertical() ? sie::Axis::x : sie::Axis::y);
  legend_ = sie::associate_legend(d_);
  for (const auto& x : d_.detections)
    if (x.cls == ElementClass::legend_label && x.text) legend_labels_.push_back(&x);
  std::sort(legend_labels_.begin(), legend_labels_.end(), [](const Detection* a, const Detection* b) {
    return std::tie(a->bbox.y, a->bbox.x) < std::tie(b->bbox.y, b->bbox.x);
  });
  for (const auto& a : sie::associate_marks(d_, {}, categories_, "")) {
    const auto* det = &d_.detections[a.detection];
    marks_.push_back({det, a.row});
  }
  std::sort(marks_.begin(), marks_.end(), [](const Mark& a, const Mark& b) {
    return std::tie(a.det->bbox.x, a.det->bbox.y) < std::tie(b.det->bbox.x, b.det->bbox.y);
  });
  std::map<int, int> color_count;
  for (const auto& m : marks_)
    if (m.det->color) color_count[*m.det->color]++;
  const bool single_category = categories_.size() < 2;
  for (const auto& [c, n] : color_count)
    if (n >= 2 || single_category) series_colors_.push_back(c);
}

const Detection* PlotView::text_of(ElementClass c) const {
  const Detection* best = nullptr;
  for (const auto& x : d_.detections)
    if (x.cls == c && x.text && (!best || x.score > best->score)) best = &x;
  return best;
}

// ---- structural answers --------------------------------------------------

namespace {

// Marks per categorical tick, in tick order.
std::vector<std::vector<const Detection*>> marks_by_row(const PlotView& v, bool bars_only) {
  std::vector<std::vector<const Detection*>> rows(v.categories().size());
  for (const auto& m : v.marks())
    if (m.row && (!bars_only || m.det->cls == ElementClass::bar)) rows[*m.row].push_back(m.det);
  return rows;
}

std::optional<LegendPosition> legend_position(const PlotView& v) {
  const auto& d = v.detections();
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY, th = 0;
  int n = 0;
  for (const auto& x : d.detections) {
    if (x.cls != ElementClass::legend_label && x.cls != ElementClass::legend_preview) continue;
    x0 = std::min(x0, x.bbox.x);
    y0 = std::min(y0, x.bbox.y);
    x1 = std::max(x1, x.bbox.right());
    y1 = std::max(y1, x.bbox.bottom());
    if (x.cls == ElementClass::legend_label) th = std::max(th, x.bbox.h);
    ++n;
  }
  if (n == 0) return std::nullopt;
  if (th == 0) th = y1 - y0;
  const double W = d.canvas_width, H = d.canvas_height;
  const auto* title = v.text_of(ElementClass::title);
  const double content_top = (title ? title->bbox.bottom() : 10 + 1.2 * th) + 10;
  const double bottom_top = H - 10 - th;
  const double right = std::fabs(x1 - (W - 10));
  const std::pair<LegendPosition, double> scored[] = {
      {LegendPosition::bottom_left, std::fabs(y0 - bottom_top) + std::fabs(x0 - 10)},
      {LegendPosition::bottom_centre, std::fabs(y0 - bottom_top) + std::fabs((x0 + x1) / 2 - W / 2)},
      {LegendPosition::bottom_right, std::fabs(y0 - bottom_top) + right},
      {LegendPosition::center_right, std::fabs((y0 + y1) / 2 - H / 2) + right},
      {LegendPosition::top_right, std::fabs(y0 - content_top) + right},
  };
  return std::min_element(std::begin(scored), std::end(scored),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

// Position of a data mark along the value axis, growing with the value.
double value_px(const Detection& m, PlotType type) {
  const double edge = sie::value_edge(m, type);
  return type == PlotType::hbar ? edge : -edge;
}

// A mark at zero has no visible extent: a bar of (almost) no length, or a
// vertex on the zero line, which passes through the lowest value tick.
std::optional<bool> has_zero_value(const PlotView& v) {
  constexpr double kZeroExtentPx = 0.01;
  const auto& d = v.detections();
  const bool vertical = v.value_vertical();
  std::optional<double> baseline;
  const auto ticks = sie::associate_ticks(d, vertical ? sie::Axis::y : sie::Axis::x);
  if (!ticks.empty()) baseline = vertical ? -ticks.back().pos : ticks.front().pos;
  for (const auto& m : v.marks()) {
    if (m.det->cls == ElementClass::bar) {
      if ((vertical ? m.det->bbox.h : m.det->bbox.w) < kZeroExtentPx) return true;
    } else {
      if (!baseline) return std::nullopt;
      if (value_px(*m.det, d.plot_type) - *baseline < kZeroExtentPx) return true;
    }
  }
  return false;
}

int count_crossings(const PlotView& v) {
  const size_t nrows = v.categories().size();
  std::map<int, std::vector<std::optional<double>>> series;
  std::map<std::pair<int, size_t>, double> best_score;
  for (int c : v.series_colors()) series[c].assign(nrows, std::nullopt);
  for (const auto& m : v.marks()) {
    if (!m.row || !m.det->color || !series.count(*m.det->color)) continue;
    const auto key = std::pair{*m.det->color, *m.row};
    auto it = best_score.find(key);
    if (it != best_score.end() && it->second >= m.det->score) continue;
    best_score[key] = m.det->score;
    series[*m.det->color][*m.row] = value_px(*m.det, v.detections().plot_type);
  }
  std::vector<std::vector<std::optional<double>>> lines;
  for (auto& [c, vals] : series) lines.push_back(vals);
  int n = 0;
  for (size_t a = 0; a < lines.size(); ++a)
    for (size_t b = a + 1; b < lines.size(); ++b) {
      std::vector<double> pa, pb;
      for (size_t r = 0; r < nrows; ++r)
        if (lines[a][r] && lines[b][r]) {
          pa.push_back(*lines[a][r]);
          pb.push_back(*lines[b][r]);
        }
      n += qgen::count_line_crossings({pa, pb});
    }
  return n;
}

}  // namespace

Answer answer_structural(int id, const qgen::Bindings& b, const PlotView& v) {
  const auto& d = v.detections();
  const bool bar = plotgen::is_bar(d.plot_type);
  const int n_legend = static_cast<int>(v.legend_labels().size());
  switch (id) {
    case 1: {
      const auto z = has_zero_value(v);
      return z ? Answer::yes_no(*z) : missing("value axis");
    }
    case 2: return Answer::yes_no(d.grid);
    case 3: {
      const auto p = legend_position(v);
      return p ? Answer::of_text(qgen::legend_position_answer(*p)) : missing("legend");
    }
    case 4: return Answer::of_number(n_legend);
    case 5: {
      if (n_legend < 2) return missing("legend");
      double lo = INFINITY, hi = -INFINITY, h = 0;
      for (const auto* l : v.legend_labels()) {
        lo = std::min(lo, l->bbox.cy());
        hi = std::max(hi, l->bbox.cy());
        h = std::max(h, l->bbox.h);
      }
      return Answer::of_text(hi - lo < h / 2 ? "horizontal" : "vertical");
    }
    case 6: return Answer::of_number(static_cast<double>(v.categories().size()));
    case 7: {
      if (!bar) return Answer::of_number(static_cast<double>(v.series_colors().size()));
      int n = 0;
      for (const auto& m : v.marks()) n += m.det->cls == ElementClass::bar;
      return Answer::of_number(n);
    }
    case 8: return Answer::of_number(static_cast<double>(v.series_colors().size()));
    case 9: {
      int n = 0;
      for (const auto& row : marks_by_row(v, true)) n += !row.empty();
      return Answer::of_number(n);
    }
    case 10:
    case 11: {
      const auto rows = marks_by_row(v, true);
      if (rows.empty()) return missing("tick labels");
      bool ok = true;
      for (const auto& r : rows)
        ok = ok && r.size() == (id == 10 ? static_cast<size_t>(n_legend) : rows[0].size());
      return Answer::yes_no(ok);
    }
    case 12:
    case 13:
    case 14:
    case 15: {
      const auto ord = ord_of(b);
      const auto rows = marks_by_row(v, true);
      if (!ord || *ord < 1 || *ord > static_cast<int>(rows.size())) return missing("tick");
      // Ticks are in pixel order: left to right, or top to bottom.
      const bool from_start = id == 12 || id == 14;
      const size_t i = from_start ? *ord - 1 : rows.size() - *ord;
      return Answer::of_number(static_cast<double>(rows[i].size()));
    }
    case 16: {
      std::vector<double> lefts, bottoms;
      for (const auto& m : v.marks())
        if (m.det->cls == ElementClass::bar) {
          lefts.push_back(m.det->bbox.x);
          bottoms.push_back(m.det->bbox.bottom());
        }
      if (lefts.size() < 2) return Answer::yes_no(d.plot_type == PlotType::hbar);
      auto spread = [](std::vector<double> x) {
        std::sort(x.begin(), x.end());
        return x.back() - x.front();
      };
      // Horizontal bars share their left edge, vertical bars their bottom edge.
      return Answer::yes_no(spread(lefts) < spread(bottoms));
    }
    case 17: return Answer::of_number(count_crossings(v));
    case 18: return Answer::yes_no(static_cast<int>(v.series_colors().size()) == n_legend);
    default: break;
  }
  return Answer::unavailable("template " + std::to_string(id) + " is not structural");
}

// ---- visual lookups --------------------------------------------------------

std::optional<Answer> answer_visual_lookup(int id, const qgen::Bindings& b, const PlotView& v) {
  const auto& d = v.detections();
  const bool vertical = v.value_vertical();
  auto text_answer = [&](ElementClass c) {
    const auto* t = v.text_of(c);
    return t ? Answer::of_text(*t->text) : missing(std::string(plotgen::to_string(c)));
  };
  switch (id) {
    case 19:
    case 20:
    case 21:
    case 22: {
      const auto ord = ord_of(b);
      if (!ord) return Answer::unavailable("bad ordinal");
      // Vote over groups for the color at the requested position.
      std::map<int, int> votes;
      for (auto row : marks_by_row(v, true)) {
        std::sort(row.begin(), row.end(), [&](const Detection* x, const Detection* y) {
          return vertical ? x->bbox.cx() < y->bbox.cx() : x->bbox.cy() < y->bbox.cy();
        });
        if (*ord > static_cast<int>(row.size())) continue;
        const bool from_start = id == 19 || id == 21;
        const auto* m = row[from_start ? *ord - 1 : row.size() - *ord];
        if (m->color) votes[*m->color]++;
      }
      if (votes.empty()) return missing("bars");
      const int color = std::max_element(votes.begin(), votes.end(), [](const auto& x, const auto& y) {
                          return x.second < y.second;
                        })->first;
      for (const auto& [label, c] : v.legend())
        if (c == color) return Answer::of_text(label);
      return missing("legend entry for the bar color");
    }
    case 23:
    case 24: {
      const auto ord = ord_of(b);
      if (!ord || *ord < 1 || *ord > static_cast<int>(v.categories().size())) return missing("tick");
      return Answer::of_text(v.categories()[*ord - 1].text);
    }
    case 26: {
      std::vector<double> vals;
      try {
        for (const auto& t : sie::value_ticks(d)) vals.push_back(*t.value);
      } catch (const ExtractionError& e) {
        return Answer::unavailable(e.what());
      }
      std::sort(vals.begin(), vals.end());
      std::vector<double> steps;
      for (size_t i = 0; i + 1 < vals.size(); ++i) steps.push_back(vals[i + 1] - vals[i]);
      std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
      return Answer::of_number(steps[steps.size() / 2]);
    }
    case 27: {
      const auto ticks = sie::associate_ticks(d, vertical ? sie::Axis::y : sie::Axis::x);
      if (ticks.empty()) return missing("value-axis ticks");
      bool sci = false;
      for (const auto& t : ticks) sci = sci || t.text.find_first_of("eE") != std::string::npos;
      return Answer::yes_no(sci);
    }
    case 28: return text_answer(ElementClass::title);
    case 29: {
      const auto& lq = b.at("LQ");
      for (const auto* l : v.legend_labels())
        if (*l->text == lq) return Answer::yes_no(true);
      return Answer::yes_no(false);
    }
    case 30: return text_answer(ElementClass::xaxis_label);
    case 31: return text_answer(ElementClass::yaxis_label);
    case 32: {
      if (v.categories().empty()) return missing("tick labels");
      const auto rows = marks_by_row(v, false);
      int n = 0;
      for (const auto& r : rows) n += r.size() != v.legend_labels().size();
      return Answer::of_number(n);
    }
    default: return std::nullopt;
  }
}

// ---- dispatch --------------------------------------------------------------

Answer answer(std::string_view question, const PlotView& v, System system) {
  const auto ctx = tableqa::ParseContext::of(v.table());
  tableqa::ParseResult p;
  try {
    p = tableqa::parse(question, &ctx);
  } catch (const UnparseableQuestion& e) {
    return Answer::unavailable(e.what());
  }
  // The branch comes from the text alone, as route() does.
  const Branch branch = route(question).branch;
  const auto& t = qgen::template_by_id(p.template_id);
  if (system == System::pipeline_only && branch == Branch::classification &&
      t.category == Category::structural)
    return Answer::unavailable("the pipeline cannot answer structural questions");
  if (system == System::classification_only && branch == Branch::pipeline)
    return Answer::unavailable("outside the classification vocabulary");

  if (t.category == Category::structural) return answer_structural(t.id, p.bindings, v);
  if (auto a = answer_visual_lookup(t.id, p.bindings, v)) return *a;
  if (!p.lf) return Answer::unavailable("no logical form for template " + std::to_string(t.id));
  try {
    return tableqa::execute(*p.lf, tableqa::build_kg(v.table()));
  } catch (const AnswerUnavailable& e) {
    return Answer::unavailable(e.what());
  } catch (const Error& e) {
    return Answer::unavailable(e.what());
  }
}

}  // namespace plotqa::hybrid
