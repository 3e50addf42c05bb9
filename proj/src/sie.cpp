#include "plotqa/sie.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>

namespace plotqa::sie {

using plotgen::ElementClass;
using plotgen::PlotType;

namespace {

bool value_axis_vertical(PlotType t) { return t != PlotType::hbar; }

bool is_data_mark(ElementClass c) {
  return c == ElementClass::bar || c == ElementClass::line || c == ElementClass::dotline;
}

// Element order independent of the order detections arrive in.
std::vector<const Detection*> canonical(const DetectionSet& d) {
  std::vector<const Detection*> v;
  for (const auto& x : d.detections) v.push_back(&x);
  std::sort(v.begin(), v.end(), [](const Detection* a, const Detection* b) {
    return std::tie(a->cls, a->bbox.y, a->bbox.x, a->bbox.w, a->bbox.h, a->text, a->color,
                    a->score) < std::tie(b->cls, b->bbox.y, b->bbox.x, b->bbox.w, b->bbox.h,
                                         b->text, b->color, b->score);
  });
  return v;
}

bool reading_order(const Detection* a, const Detection* b) {
  return std::tie(a->bbox.y, a->bbox.x) < std::tie(b->bbox.y, b->bbox.x);
}

double centre_distance(const BBox& a, const BBox& b) {
  return std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
}

std::vector<const Detection*> legend_labels(const std::vector<const Detection*>& all) {
  std::vector<const Detection*> out;
  for (const auto* x : all)
    if (x->cls == ElementClass::legend_label && x->text) out.push_back(x);
  std::stable_sort(out.begin(), out.end(), reading_order);
  return out;
}

double round_significant(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::map<std::string, int> associate_legend(const DetectionSet& d) {
  const auto all = canonical(d);
  const auto labels = legend_labels(all);
  std::vector<const Detection*> previews;
  for (const auto* x : all)
    if (x->cls == ElementClass::legend_preview && x->color) previews.push_back(x);
  std::stable_sort(previews.begin(), previews.end(), reading_order);

  std::map<std::string, int> out;
  if (labels.empty() || previews.empty()) return out;
  const bool labels_smaller = labels.size() <= previews.size();
  const auto& small = labels_smaller ? labels : previews;
  const auto& large = labels_smaller ? previews : labels;
  const size_t k = small.size();
  auto pair_at = [&](size_t i, size_t j) {
    return labels_smaller ? std::pair{small[i], large[j]} : std::pair{large[j], small[i]};
  };

  std::vector<size_t> best(k);
  if (large.size() <= 8) {
    // Exhaustive search; permutations come in lexicographic order, so on a
    // tie the earliest preview in reading order wins.
    std::vector<size_t> perm(large.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = INFINITY;
    do {
      double cost = 0;
      for (size_t i = 0; i < k; ++i) {
        const auto [l, p] = pair_at(i, perm[i]);
        cost += centre_distance(l->bbox, p->bbox);
      }
      if (cost < best_cost - 1e-9) {
        best_cost = cost;
        std::copy(perm.begin(), perm.begin() + k, best.begin());
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<std::tuple<double, size_t, size_t>> pairs;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < large.size(); ++j) {
        const auto [l, p] = pair_at(i, j);
        pairs.emplace_back(centre_distance(l->bbox, p->bbox), i, j);
      }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> used_i(k), used_j(large.size());
    for (const auto& [dist, i, j] : pairs) {
      if (used_i[i] || used_j[j]) continue;
      used_i[i] = used_j[j] = true;
      best[i] = j;
    }
  }
  for (size_t i = 0; i < k; ++i) {
    const auto [l, p] = pair_at(i, best[i]);
    out.emplace(*l->text, *p->color);
  }
  return out;
}

std::vector<Tick> associate_ticks(const DetectionSet& d, Axis axis) {
  const ElementClass cls = axis == Axis::x ? ElementClass::xtick_label : ElementClass::ytick_label;
  std::vector<Tick> out;
  for (const auto* x : canonical(d)) {
    if (x->cls != cls || !x->text) continue;
    out.push_back({*x->text, axis == Axis::x ? x->bbox.cx() : x->bbox.cy(),
                   parse_number(*x->text)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Tick& a, const Tick& b) { return a.pos < b.pos; });
  return out;
}

std::vector<Tick> value_ticks(const DetectionSet& d) {
  const Axis axis = value_axis_vertical(d.plot_type) ? Axis::y : Axis::x;
  std::vector<Tick> out;
  for (auto& t : associate_ticks(d, axis)) {
    if (!t.value) continue;
    if (!out.empty() && out.back().pos == t.pos) continue;
    out.push_back(std::move(t));
  }
  if (out.size() < 2)
    throw ExtractionError("fewer than two readable value-axis ticks");
  return out;
}

double interpolate_value(double edge, const std::vector<Tick>& ticks) {
  if (ticks.size() < 2) throw ExtractionError("interpolation needs two ticks");
  for (const auto& t : ticks) {
    if (!t.value) throw ExtractionError("tick '" + t.text + "' is not a number");
    if (t.pos == edge) return *t.value;
  }
  auto lerp = [edge](const Tick& a, const Tick& b) {
    return *a.value + (edge - a.pos) / (b.pos - a.pos) * (*b.value - *a.value);
  };
  for (size_t i = 0; i + 1 < ticks.size(); ++i)
    if (ticks[i].pos < edge && edge < ticks[i + 1].pos) return lerp(ticks[i], ticks[i + 1]);
  return lerp(ticks.front(), ticks.back());
}

double value_edge(const Detection& m, PlotType type) {
  switch (type) {
    case PlotType::vbar: return m.bbox.y;
    case PlotType::hbar: return m.bbox.right();
    case PlotType::line:
    case PlotType::dotline: return m.bbox.cy();
  }
  return m.bbox.cy();
}

std::vector<MarkAssignment> associate_marks(const DetectionSet& d,
                                            const std::map<std::string, int>& legend,
                                            const std::vector<Tick>& categories,
                                            const std::string& single_col) {
  const bool vertical = value_axis_vertical(d.plot_type);
  // Marks further than half a category slot from every tick belong to a tick
  // that was not detected.
  double gate = INFINITY;
  if (categories.size() >= 2) {
    std::vector<double> gaps;
    for (size_t i = 0; i + 1 < categories.size(); ++i)
      gaps.push_back(categories[i + 1].pos - categories[i].pos);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    gate = 0.5 * gaps[gaps.size() / 2];
  }
  std::vector<MarkAssignment> out;
  for (size_t i = 0; i < d.detections.size(); ++i) {
    const auto& m = d.detections[i];
    if (!is_data_mark(m.cls)) continue;
    MarkAssignment a;
    a.detection = i;
    const double c = vertical ? m.bbox.cx() : m.bbox.cy();
    double best = INFINITY;
    for (size_t r = 0; r < categories.size(); ++r) {
      const double dist = std::fabs(categories[r].pos - c);
      if (dist < best) {
        best = dist;
        a.row = r;
      }
    }
    if (best > gate) a.row.reset();
    if (legend.empty()) {
      a.col = single_col;
    } else if (m.color) {
      for (const auto& [label, color] : legend)
        if (color == *m.color) {
          a.col = label;
          break;
        }
    }
    out.push_back(std::move(a));
  }
  return out;
}

Extraction extract(const DetectionSet& input) {
  // Work on a canonically ordered copy so the result ignores input order.
  DetectionSet d = input;
  d.detections.clear();
  for (const auto* x : canonical(input)) d.detections.push_back(*x);

  Extraction ex;
  const bool vertical = value_axis_vertical(d.plot_type);
  const auto categories = associate_ticks(d, vertical ? Axis::x : Axis::y);
  std::vector<std::string> rows;
  for (const auto& t : categories) rows.push_back(t.text);

  const auto legend = associate_legend(d);
  std::vector<std::string> cols;
  {
    std::vector<const Detection*> all;
    for (const auto& x : d.detections) all.push_back(&x);
    std::set<std::string> seen;
    for (const auto* l : legend_labels(all))
      if (seen.insert(*l->text).second) cols.push_back(*l->text);
  }
  std::string single_col;
  if (legend.empty()) {
    const ElementClass title_cls = vertical ? ElementClass::yaxis_label : ElementClass::xaxis_label;
    for (const auto& x : d.detections)
      if (x.cls == title_cls && x.text) single_col = *x.text;
    if (single_col.empty() && cols.size() == 1) single_col = cols[0];
    if (single_col.empty()) {
      single_col = "value";
      ex.warnings.push_back("no legend and no value-axis title; column named 'value'");
    }
    if (cols.size() > 1) ex.warnings.push_back("legend labels found but no previews matched");
    cols = {single_col};
  }
  ex.table = SemiStructuredTable(rows, cols);

  std::vector<Tick> ticks;
  try {
    ticks = value_ticks(d);
  } catch (const ExtractionError& e) {
    ex.warnings.push_back(e.what());
    return ex;
  }
  // Pixels per data unit, for snapping marks that sit on the zero line.
  const double ppu = std::fabs((ticks.back().pos - ticks.front().pos) /
                               (*ticks.back().value - *ticks.front().value));

  std::map<std::pair<size_t, size_t>, std::pair<double, double>> best;  // cell -> (score, -dist)
  for (const auto& a : associate_marks(d, legend, categories, single_col)) {
    if (!a.row || !a.col) {
      ++ex.unassigned_marks;
      continue;
    }
    const size_t c = static_cast<size_t>(
        std::find(cols.begin(), cols.end(), *a.col) - cols.begin());
    if (c == cols.size()) {
      ++ex.unassigned_marks;
      continue;
    }
    const auto& m = d.detections[a.detection];
    double v = interpolate_value(value_edge(m, d.plot_type), ticks);
    if (std::isfinite(ppu) && std::fabs(v) * ppu < 0.01) v = 0;
    v = round_significant(v);
    const double dist = std::fabs(categories[*a.row].pos - (vertical ? m.bbox.cx() : m.bbox.cy()));
    const std::pair<double, double> rank{m.score, -dist};
    const auto key = std::pair{*a.row, c};
    auto it = best.find(key);
    if (it != best.end() && it->second >= rank) continue;
    best[key] = rank;
    ex.table.cells[*a.row][c] = v;
  }
  if (ex.unassigned_marks)
    ex.warnings.push_back(std::to_string(ex.unassigned_marks) + " data marks left unassigned");
  return ex;
}

F1 table_f1(const SemiStructuredTable& pred, const SemiStructuredTable& gold, double rel_tol) {
  if (!(rel_tol >= 0)) throw Error("table_f1: rel_tol must be >= 0");
  struct Tuple {
    const std::string* row;
    const std::string* col;
    double v;
  };
  auto tuples = [](const SemiStructuredTable& t) {
    std::vector<Tuple> out;
    for (size_t r = 0; r < t.rows(); ++r)
      for (size_t c = 0; c < t.cols(); ++c)
        if (t.cells[r][c]) out.push_back({&t.row_headers[r], &t.col_headers[c], *t.cells[r][c]});
    return out;
  };
  const auto p = tuples(pred), g = tuples(gold);
  if (p.empty() && g.empty()) return {1, 1, 1};
  std::vector<bool> used(g.size(), false);
  int matched = 0;
  for (const auto& x : p) {
    for (size_t j = 0; j < g.size(); ++j) {
      if (used[j] || *g[j].row != *x.row || *g[j].col != *x.col) continue;
      if (std::fabs(x.v - g[j].v) <= rel_tol * std::fabs(g[j].v)) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  F1 f;
  f.precision = p.empty() ? 0 : static_cast<double>(matched) / p.size();
  f.recall = g.empty() ? 0 : static_cast<double>(matched) / g.size();
  f.f1 = f.precision + f.recall > 0 ? 2 * f.precision * f.recall / (f.precision + f.recall) : 0;
  return f;
}

}  // namespace plotqa::sie
