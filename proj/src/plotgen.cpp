#include "plotqa/plotgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace plotqa::plotgen {

namespace {

template <class E, size_t N>
E enum_from(std::string_view s, const std::array<E, N>& values, std::string_view what) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw SchemaError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array kNotations = {TickNotation::standard, TickNotation::scientific_e};
constexpr std::array kLineStyles = {LineStyle::solid, LineStyle::dashed, LineStyle::dotted,
                                    LineStyle::dashdot};
constexpr std::array kMarkers = {Marker::asterisk, Marker::circle,   Marker::diamond,
                                 Marker::square,   Marker::triangle, Marker::inverted_triangle};

}  // namespace

std::string_view to_string(PlotType t) {
  switch (t) {
    case PlotType::vbar: return "vbar";
    case PlotType::hbar: return "hbar";
    case PlotType::line: return "line";
    case PlotType::dotline: return "dotline";
  }
  return "vbar";
}
PlotType plot_type_from_string(std::string_view s) { return enum_from(s, kPlotTypes, "plot type"); }

std::string_view to_string(TickNotation n) {
  return n == TickNotation::standard ? "standard" : "scientific_E";
}
std::string_view to_string(LineStyle s) {
  switch (s) {
    case LineStyle::solid: return "solid";
    case LineStyle::dashed: return "dashed";
    case LineStyle::dotted: return "dotted";
    case LineStyle::dashdot: return "dashdot";
  }
  return "solid";
}
std::string_view to_string(Marker m) {
  switch (m) {
    case Marker::asterisk: return "asterisk";
    case Marker::circle: return "circle";
    case Marker::diamond: return "diamond";
    case Marker::square: return "square";
    case Marker::triangle: return "triangle";
    case Marker::inverted_triangle: return "inverted_triangle";
  }
  return "circle";
}
std::string_view to_string(LegendPosition p) {
  switch (p) {
    case LegendPosition::bottom_left: return "bottom-left";
    case LegendPosition::bottom_centre: return "bottom-centre";
    case LegendPosition::bottom_right: return "bottom-right";
    case LegendPosition::center_right: return "center-right";
    case LegendPosition::top_right: return "top-right";
  }
  return "top-right";
}
TickNotation tick_notation_from_string(std::string_view s) {
  return enum_from(s, kNotations, "tick notation");
}
LineStyle line_style_from_string(std::string_view s) { return enum_from(s, kLineStyles, "line style"); }
Marker marker_from_string(std::string_view s) { return enum_from(s, kMarkers, "marker"); }
LegendPosition legend_position_from_string(std::string_view s) {
  return enum_from(s, kLegendPositions, "legend position");
}

std::string_view to_string(ElementClass c) {
  switch (c) {
    case ElementClass::title: return "title";
    case ElementClass::bar: return "bar";
    case ElementClass::line: return "line";
    case ElementClass::dotline: return "dotline";
    case ElementClass::xaxis_label: return "xaxis_label";
    case ElementClass::yaxis_label: return "yaxis_label";
    case ElementClass::xtick_label: return "xtick_label";
    case ElementClass::ytick_label: return "ytick_label";
    case ElementClass::legend_label: return "legend_label";
    case ElementClass::legend_preview: return "legend_preview";
  }
  return "title";
}
ElementClass element_class_from_string(std::string_view s) {
  return enum_from(s, kElementClasses, "element class");
}

bool is_textual(ElementClass c) {
  switch (c) {
    case ElementClass::title:
    case ElementClass::xaxis_label:
    case ElementClass::yaxis_label:
    case ElementClass::xtick_label:
    case ElementClass::ytick_label:
    case ElementClass::legend_label: return true;
    default: return false;
  }
}
bool is_mark(ElementClass c) { return !is_textual(c); }

double text_width(std::string_view text, double px) {
  return 0.6 * px * static_cast<double>(std::max<size_t>(text.size(), 1));
}
double text_height(double px) { return 1.2 * px; }

ValueAxis nice_value_axis(double data_max) {
  ValueAxis axis;
  if (!(data_max > 0)) data_max = 0;
  // Smallest m * 10^k >= data_max with m in {1, 2, 2.5, 5}.
  static constexpr double kMantissas[] = {1, 2, 2.5, 5};
  double best = 1;
  if (data_max > 0) {
    const int k0 = static_cast<int>(std::floor(std::log10(data_max))) - 1;
    best = INFINITY;
    for (int k = k0; k <= k0 + 2; ++k)
      for (double m : kMantissas) {
        const double cand = m * std::pow(10.0, k);
        if (cand >= data_max && cand < best) best = cand;
      }
  }
  axis.max = best;
  // Step giving between 5 and 10 ticks including zero: 1/2/5 mantissas are
  // preferred over 2.5, then the largest step.
  const int kb = static_cast<int>(std::floor(std::log10(best)));
  double step = 0;
  int step_rank = -1;
  for (int k = kb; k >= kb - 2; --k)
    for (int mi = 0; mi < 4; ++mi) {
      const double s = kMantissas[mi] * std::pow(10.0, k);
      const double n = best / s;
      const double rounded = std::round(n);
      if (std::fabs(n - rounded) > 1e-9 * rounded || rounded + 1 < 5 || rounded + 1 > 10)
        continue;
      const int rank = kMantissas[mi] == 2.5 ? 0 : 1;
      if (rank > step_rank || (rank == step_rank && s > step)) {
        step = s;
        step_rank = rank;
      }
    }
  axis.step = step;
  const int n = static_cast<int>(std::lround(best / step));
  for (int i = 0; i <= n; ++i) axis.ticks.push_back(i * step);
  axis.ticks.back() = best;
  return axis;
}

std::string tick_label(double value, double step, TickNotation notation) {
  if (notation == TickNotation::scientific_e) return format_sci_e(value);
  int decimals = 0;
  double s = step;
  while (decimals < 10 && std::fabs(s - std::round(s)) > 1e-9 * std::max(1.0, s)) {
    s *= 10;
    ++decimals;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

SemiStructuredTable gold_table(const corpus::PlotData& data) {
  std::vector<std::string> cols;
  for (const auto& s : data.series) cols.push_back(s.legend_label);
  SemiStructuredTable t(data.x_categories, cols);
  for (size_t c = 0; c < data.series.size(); ++c)
    for (size_t r = 0; r < data.x_categories.size(); ++r)
      t.cells[r][c] = data.series[c].values[r];
  return t;
}

namespace {

struct TextItem {
  ElementClass cls;
  std::string text;
  BBox box;
  double font;
  bool rotated = false;
};

struct MarkItem {
  ElementClass cls;
  BBox box;
  int color;
  int series;
  int x_index;
};

struct LegendItem {
  BBox preview;
  BBox label;
  int series;
};

struct Layout {
  std::vector<TextItem> texts;
  std::vector<MarkItem> marks;
  std::vector<LegendItem> legend;
  BBox plot;  // plot area
  ValueAxis axis;
  bool value_vertical = true;
  std::vector<double> category_pos;     // centre along categorical axis
  std::vector<double> tick_pos;         // value tick pixel positions
  std::vector<std::vector<std::pair<double, double>>> polylines;  // per series
};

constexpr double kMargin = 10;
constexpr double kLabelGap = 6;
constexpr double kLegendInnerGap = 5;
constexpr double kLegendItemGap = 25;
constexpr double kLegendRowGap = 8;
constexpr double kLineVertexBox = 6;
constexpr double kMarkerBox = 8;
constexpr double kMinPlotExtent = 80;
constexpr double kMinBarExtent = 1e-3;

double data_max(const corpus::PlotData& d) {
  double m = 0;
  for (const auto& s : d.series)
    for (double v : s.values) m = std::max(m, v);
  return m;
}

Layout compute_layout(const PlotSpec& spec) {
  const auto& d = spec.data;
  const auto& st = spec.style;
  const double W = st.canvas_width, H = st.canvas_height;
  const double F = font_px(st.font_size);
  const double TH = text_height(F);
  const double TF = F * 1.2;
  const bool bar = is_bar(spec.plot_type);
  const int nseries = static_cast<int>(d.series.size());
  const int ncat = static_cast<int>(d.x_categories.size());
  if (static_cast<int>(st.series_colors.size()) != nseries)
    throw LayoutError("series_colors size does not match series count");

  Layout L;
  L.value_vertical = spec.plot_type != PlotType::hbar;
  L.axis = nice_value_axis(data_max(d));

  // Title.
  const double title_w = text_width(d.title, TF);
  const double title_h = text_height(TF);
  L.texts.push_back({ElementClass::title, d.title,
                     {(W - title_w) / 2, kMargin, title_w, title_h}, TF});
  const double content_top = kMargin + title_h + 10;

  // Legend block.
  const double pw = bar ? 0.9 * F : 2.0 * F;
  const double ph = 0.9 * F;
  const bool horizontal = legend_is_horizontal(st.legend_position);
  double bottom_reserved = 0, right_reserved = 0;
  {
    std::vector<double> lw;
    for (const auto& s : d.series) lw.push_back(text_width(s.legend_label, F));
    if (horizontal) {
      double total = 0;
      for (int i = 0; i < nseries; ++i)
        total += pw + kLegendInnerGap + lw[i] + (i ? kLegendItemGap : 0);
      if (total > W - 2 * kMargin) throw LayoutError("legend does not fit horizontally");
      double x = kMargin;
      if (st.legend_position == LegendPosition::bottom_centre) x = (W - total) / 2;
      if (st.legend_position == LegendPosition::bottom_right) x = W - kMargin - total;
      const double y = H - kMargin - TH;
      for (int i = 0; i < nseries; ++i) {
        LegendItem item;
        item.series = i;
        item.preview = {x, y + (TH - ph) / 2, pw, ph};
        item.label = {x + pw + kLegendInnerGap, y, lw[i], TH};
        x = item.label.right() + kLegendItemGap;
        L.legend.push_back(item);
      }
      bottom_reserved = TH + 12;
    } else {
      const double colw = pw + kLegendInnerGap + *std::max_element(lw.begin(), lw.end());
      const double pitch = TH + kLegendRowGap;
      const double block_h = nseries * TH + (nseries - 1) * kLegendRowGap;
      const double x = W - kMargin - colw;
      double y = st.legend_position == LegendPosition::top_right ? content_top
                                                                 : (H - block_h) / 2;
      for (int i = 0; i < nseries; ++i) {
        LegendItem item;
        item.series = i;
        item.preview = {x, y + (TH - ph) / 2, pw, ph};
        item.label = {x + pw + kLegendInnerGap, y, lw[i], TH};
        L.legend.push_back(item);
        y += pitch;
      }
      right_reserved = colw + 15;
    }
  }

  // Tick label texts.
  std::vector<std::string> value_labels;
  for (double t : L.axis.ticks) value_labels.push_back(tick_label(t, L.axis.step, st.tick_notation));
  double max_value_w = 0;
  for (const auto& s : value_labels) max_value_w = std::max(max_value_w, text_width(s, F));
  double max_cat_w = 0;
  for (const auto& s : d.x_categories) max_cat_w = std::max(max_cat_w, text_width(s, F));

  // Axis titles: the vertical one is rotated and sits at the left edge.
  const std::string horiz_title = L.value_vertical ? d.x_label : d.y_label;
  const std::string vert_title = L.value_vertical ? d.y_label : d.x_label;
  const double left_tick_w = L.value_vertical ? max_value_w : max_cat_w;

  BBox plot;
  plot.x = kMargin + TH + 8 + left_tick_w + kLabelGap;
  double plot_right = W - kMargin - right_reserved;
  plot.y = content_top + TH / 2;

  // Horizontal-axis tick labels: horizontal when they fit, else rotated.
  bool rotate_bottom = false;
  double bottom_tick_h = TH;
  if (L.value_vertical) {
    const double slot = (plot_right - plot.x) / ncat;
    if (max_cat_w > 0.9 * slot) {
      if (TH > 0.9 * slot) throw LayoutError("category labels overlap");
      rotate_bottom = true;
      bottom_tick_h = max_cat_w;
    }
  } else {
    plot_right -= max_value_w / 2;
    const double spacing = (plot_right - plot.x) / (L.axis.ticks.size() - 1);
    if (max_value_w > 0.9 * spacing) {
      if (TH > 0.9 * spacing) throw LayoutError("value tick labels overlap");
      rotate_bottom = true;
      bottom_tick_h = max_value_w;
      plot_right += max_value_w / 2;
    }
  }
  const double plot_bottom =
      H - kMargin - bottom_reserved - TH - kLabelGap - bottom_tick_h - kLabelGap;
  plot.w = plot_right - plot.x;
  plot.h = plot_bottom - plot.y;
  if (plot.w < kMinPlotExtent || plot.h < kMinPlotExtent)
    throw LayoutError("canvas too small for plot area");
  L.plot = plot;

  auto value_px = [&](double v) {
    return L.value_vertical ? plot.bottom() - v / L.axis.max * plot.h
                            : plot.x + v / L.axis.max * plot.w;
  };
  for (double t : L.axis.ticks) L.tick_pos.push_back(value_px(t));
  const double slot = (L.value_vertical ? plot.w : plot.h) / ncat;
  for (int i = 0; i < ncat; ++i)
    L.category_pos.push_back((L.value_vertical ? plot.x : plot.y) + (i + 0.5) * slot);
  if (!L.value_vertical && TH > 0.9 * slot) throw LayoutError("category labels overlap");

  // Tick labels.
  auto bottom_label = [&](ElementClass cls, const std::string& text, double cx) {
    const double w = text_width(text, F);
    TextItem item{cls, text, {}, F, rotate_bottom};
    const double top = plot.bottom() + kLabelGap;
    item.box = rotate_bottom ? BBox{cx - TH / 2, top, TH, w} : BBox{cx - w / 2, top, w, TH};
    L.texts.push_back(item);
  };
  auto left_label = [&](ElementClass cls, const std::string& text, double cy) {
    const double w = text_width(text, F);
    L.texts.push_back({cls, text, {plot.x - kLabelGap - w, cy - TH / 2, w, TH}, F});
  };
  if (L.value_vertical) {
    for (int i = 0; i < ncat; ++i)
      bottom_label(ElementClass::xtick_label, d.x_categories[i], L.category_pos[i]);
    for (size_t i = 0; i < value_labels.size(); ++i)
      left_label(ElementClass::ytick_label, value_labels[i], L.tick_pos[i]);
  } else {
    for (size_t i = 0; i < value_labels.size(); ++i)
      bottom_label(ElementClass::xtick_label, value_labels[i], L.tick_pos[i]);
    for (int i = 0; i < ncat; ++i)
      left_label(ElementClass::ytick_label, d.x_categories[i], L.category_pos[i]);
  }

  // Axis titles.
  {
    const double w = text_width(horiz_title, F);
    const double top = plot.bottom() + kLabelGap + bottom_tick_h + kLabelGap;
    L.texts.push_back({ElementClass::xaxis_label, horiz_title,
                       {plot.cx() - w / 2, top, w, TH}, F});
    const double vh = text_width(vert_title, F);
    L.texts.push_back({ElementClass::yaxis_label, vert_title,
                       {kMargin, plot.cy() - vh / 2, TH, vh}, F, true});
  }

  for (const auto& item : L.legend)
    L.texts.push_back({ElementClass::legend_label, d.series[item.series].legend_label,
                       item.label, F});

  // Data marks.
  if (bar) {
    const double group = 0.8 * slot;
    const double bw = group / (nseries + 0.1 * (nseries - 1));
    for (int c = 0; c < ncat; ++c) {
      const double start = L.category_pos[c] - group / 2;
      for (int s = 0; s < nseries; ++s) {
        const double v = d.series[s].values[c];
        const double off = start + s * bw * 1.1;
        const double len = std::max(v / L.axis.max * (L.value_vertical ? plot.h : plot.w),
                                    kMinBarExtent);
        BBox b = L.value_vertical ? BBox{off, plot.bottom() - len, bw, len}
                                  : BBox{plot.x, off, len, bw};
        L.marks.push_back({ElementClass::bar, b, st.series_colors[s], s, c});
      }
    }
  } else {
    const bool dot = spec.plot_type == PlotType::dotline;
    const double box = dot ? kMarkerBox : kLineVertexBox;
    L.polylines.resize(nseries);
    for (int s = 0; s < nseries; ++s)
      for (int c = 0; c < ncat; ++c) {
        const double px = L.category_pos[c];
        const double py = value_px(d.series[s].values[c]);
        L.polylines[s].push_back({px, py});
        L.marks.push_back({dot ? ElementClass::dotline : ElementClass::line,
                           {px - box / 2, py - box / 2, box, box},
                           st.series_colors[s], s, c});
      }
  }

  // Textual elements must not overlap and everything must be on the canvas.
  const BBox canvas{0, 0, W, H};
  for (size_t i = 0; i < L.texts.size(); ++i) {
    if (!contains(canvas, L.texts[i].box))
      throw LayoutError("text '" + L.texts[i].text + "' falls outside the canvas");
    for (size_t j = i + 1; j < L.texts.size(); ++j)
      if (overlaps(L.texts[i].box, L.texts[j].box))
        throw LayoutError("text '" + L.texts[i].text + "' overlaps '" + L.texts[j].text + "'");
  }
  for (const auto& m : L.marks)
    if (!contains(canvas, m.box)) throw LayoutError("mark falls outside the canvas");
  return L;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string_view dasharray(LineStyle s) {
  switch (s) {
    case LineStyle::solid: return "";
    case LineStyle::dashed: return " stroke-dasharray=\"8,4\"";
    case LineStyle::dotted: return " stroke-dasharray=\"2,3\"";
    case LineStyle::dashdot: return " stroke-dasharray=\"8,3,2,3\"";
  }
  return "";
}

std::string marker_svg(Marker m, double cx, double cy, double size, std::string_view color) {
  const double r = size / 2;
  std::string fill = " fill=\"" + std::string(color) + "\"";
  switch (m) {
    case Marker::circle:
      return "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\"" +
             fill + "/>";
    case Marker::square:
      return "<rect x=\"" + num(cx - r) + "\" y=\"" + num(cy - r) + "\" width=\"" +
             num(size) + "\" height=\"" + num(size) + "\"" + fill + "/>";
    case Marker::diamond:
      return "<polygon points=\"" + num(cx) + "," + num(cy - r) + " " + num(cx + r) + "," +
             num(cy) + " " + num(cx) + "," + num(cy + r) + " " + num(cx - r) + "," +
             num(cy) + "\"" + fill + "/>";
    case Marker::triangle:
      return "<polygon points=\"" + num(cx) + "," + num(cy - r) + " " + num(cx + r) + "," +
             num(cy + r) + " " + num(cx - r) + "," + num(cy + r) + "\"" + fill + "/>";
    case Marker::inverted_triangle:
      return "<polygon points=\"" + num(cx - r) + "," + num(cy - r) + " " + num(cx + r) +
             "," + num(cy - r) + " " + num(cx) + "," + num(cy + r) + "\"" + fill + "/>";
    case Marker::asterisk: {
      std::string out = "<g stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\">";
      for (int k = 0; k < 3; ++k) {
        const double a = M_PI / 2 + k * M_PI / 3;
        const double dx = r * std::cos(a), dy = r * std::sin(a);
        out += "<line x1=\"" + num(cx - dx) + "\" y1=\"" + num(cy - dy) + "\" x2=\"" +
               num(cx + dx) + "\" y2=\"" + num(cy + dy) + "\"/>";
      }
      return out + "</g>";
    }
  }
  return "";
}

}  // namespace

PlotSpec make_plot_spec(const corpus::PlotData& data, uint64_t seed) {
  Rng rng(seed);
  PlotSpec spec;
  spec.data = data;
  // Bars are twice as common as lines, as in the reference dataset splits.
  static constexpr PlotType kTypeWheel[] = {PlotType::vbar, PlotType::vbar, PlotType::hbar,
                                            PlotType::hbar, PlotType::line, PlotType::dotline};
  spec.plot_type = kTypeWheel[rng.next() % std::size(kTypeWheel)];
  auto& st = spec.style;
  st.grid = rng.bernoulli(0.5);
  st.font_size = rng.uniform_int(8, 12);
  const double vmax = nice_value_axis(data_max(data)).max;
  const double p_sci = vmax >= 1e4 ? 0.5 : 0.2;
  st.tick_notation = (vmax >= 1e9 || rng.bernoulli(p_sci)) ? TickNotation::scientific_e
                                                           : TickNotation::standard;
  st.line_style = kLineStyles[rng.next() % kLineStyles.size()];
  st.marker = kMarkers[rng.next() % kMarkers.size()];
  st.legend_position = kLegendPositions[rng.next() % kLegendPositions.size()];
  std::vector<int> ids(kPaletteSize);
  for (int i = 0; i < kPaletteSize; ++i) ids[i] = i;
  rng.shuffle(ids);
  ids.resize(data.series.size());
  st.series_colors = ids;

  // Fall back to smaller fonts, then a vertical legend, then E-notation until
  // the layout fits.
  auto fits = [&] {
    try {
      compute_layout(spec);
      return true;
    } catch (const LayoutError&) {
      return false;
    }
  };
  while (!fits()) {
    if (st.font_size > 8) {
      st.font_size -= 1;
    } else if (legend_is_horizontal(st.legend_position)) {
      st.legend_position = LegendPosition::center_right;
      st.font_size = rng.uniform_int(8, 12);
    } else if (st.tick_notation == TickNotation::standard) {
      st.tick_notation = TickNotation::scientific_e;
    } else {
      break;  // render reports the layout error
    }
  }
  return spec;
}

Rendered render(const PlotSpec& spec) {
  const Layout L = compute_layout(spec);
  const auto& st = spec.style;
  const auto& pal = palette();
  Rendered out;
  auto& ann = out.annotation;
  ann.style = st;
  ann.plot_type = spec.plot_type;
  ann.gold_table = gold_table(spec.data);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(st.canvas_width) + "\" height=\"" + std::to_string(st.canvas_height) +
         "\" viewBox=\"0 0 " + std::to_string(st.canvas_width) + " " +
         std::to_string(st.canvas_height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(st.canvas_width) + "\" height=\"" +
         std::to_string(st.canvas_height) + "\" fill=\"#ffffff\"/>\n";

  // Grid and axes.
  const BBox& p = L.plot;
  if (st.grid) {
    svg += "<g class=\"grid\" stroke=\"#d0d0d0\" stroke-width=\"0.8\">\n";
    for (double t : L.tick_pos) {
      if (L.value_vertical)
        svg += "<line x1=\"" + num(p.x) + "\" y1=\"" + num(t) + "\" x2=\"" + num(p.right()) +
               "\" y2=\"" + num(t) + "\"/>\n";
      else
        svg += "<line x1=\"" + num(t) + "\" y1=\"" + num(p.y) + "\" x2=\"" + num(t) +
               "\" y2=\"" + num(p.bottom()) + "\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(p.x) + "\" y1=\"" + num(p.bottom()) + "\" x2=\"" +
         num(p.right()) + "\" y2=\"" + num(p.bottom()) + "\"/>\n";
  svg += "<line x1=\"" + num(p.x) + "\" y1=\"" + num(p.y) + "\" x2=\"" + num(p.x) +
         "\" y2=\"" + num(p.bottom()) + "\"/>\n";
  for (double t : L.tick_pos) {
    if (L.value_vertical)
      svg += "<line x1=\"" + num(p.x - 4) + "\" y1=\"" + num(t) + "\" x2=\"" + num(p.x) +
             "\" y2=\"" + num(t) + "\"/>\n";
    else
      svg += "<line x1=\"" + num(t) + "\" y1=\"" + num(p.bottom()) + "\" x2=\"" + num(t) +
             "\" y2=\"" + num(p.bottom() + 4) + "\"/>\n";
  }
  for (double c : L.category_pos) {
    if (L.value_vertical)
      svg += "<line x1=\"" + num(c) + "\" y1=\"" + num(p.bottom()) + "\" x2=\"" + num(c) +
             "\" y2=\"" + num(p.bottom() + 4) + "\"/>\n";
    else
      svg += "<line x1=\"" + num(p.x - 4) + "\" y1=\"" + num(c) + "\" x2=\"" + num(p.x) +
             "\" y2=\"" + num(c) + "\"/>\n";
  }
  svg += "</g>\n";

  // Marks.
  const bool dot = spec.plot_type == PlotType::dotline;
  if (is_bar(spec.plot_type)) {
    for (const auto& m : L.marks)
      svg += "<rect class=\"bar\" x=\"" + num(m.box.x) + "\" y=\"" + num(m.box.y) +
             "\" width=\"" + num(m.box.w) + "\" height=\"" + num(m.box.h) + "\" fill=\"" +
             std::string(pal[m.color].hex) + "\"/>\n";
  } else {
    for (size_t s = 0; s < L.polylines.size(); ++s) {
      const auto color = pal[st.series_colors[s]].hex;
      svg += "<polyline class=\"" + std::string(dot ? "dotline" : "line") +
             "\" fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"" +
             std::string(dasharray(st.line_style)) + " points=\"";
      for (size_t i = 0; i < L.polylines[s].size(); ++i)
        svg += (i ? " " : "") + num(L.polylines[s][i].first) + "," +
               num(L.polylines[s][i].second);
      svg += "\"/>\n";
      if (dot)
        for (const auto& [x, y] : L.polylines[s])
          svg += marker_svg(st.marker, x, y, kMarkerBox, color) + "\n";
    }
  }

  // Legend previews.
  for (const auto& item : L.legend) {
    const auto color = pal[st.series_colors[item.series]].hex;
    const BBox& b = item.preview;
    if (is_bar(spec.plot_type)) {
      svg += "<rect class=\"legend_preview\" x=\"" + num(b.x) + "\" y=\"" + num(b.y) +
             "\" width=\"" + num(b.w) + "\" height=\"" + num(b.h) + "\" fill=\"" +
             std::string(color) + "\"/>\n";
    } else {
      svg += "<line class=\"legend_preview\" x1=\"" + num(b.x) + "\" y1=\"" + num(b.cy()) +
             "\" x2=\"" + num(b.right()) + "\" y2=\"" + num(b.cy()) + "\" stroke=\"" +
             std::string(color) + "\" stroke-width=\"2\"" +
             std::string(dasharray(st.line_style)) + "/>\n";
      if (dot) svg += marker_svg(st.marker, b.cx(), b.cy(), b.h, color) + "\n";
    }
  }

  // Text.
  for (const auto& t : L.texts) {
    svg += "<text class=\"" + std::string(to_string(t.cls)) + "\" x=\"" + num(t.box.cx()) +
           "\" y=\"" + num(t.box.cy()) + "\" font-family=\"DejaVu Sans Mono, monospace\"" +
           " font-size=\"" + num(t.font) + "\" text-anchor=\"middle\"" +
           " dominant-baseline=\"central\"";
    if (t.rotated)
      svg += " transform=\"rotate(-90 " + num(t.box.cx()) + " " + num(t.box.cy()) + ")\"";
    svg += ">" + xml_escape(t.text) + "</text>\n";
  }
  svg += "</svg>\n";
  out.svg = std::move(svg);

  // Annotation, in a fixed element order.
  for (const auto& t : L.texts) {
    VisualElement e;
    e.cls = t.cls;
    e.bbox = t.box;
    e.text = t.text;
    ann.elements.push_back(e);
  }
  for (auto& e : ann.elements) {
    if (e.cls != ElementClass::legend_label) continue;
    for (const auto& item : L.legend)
      if (item.label == e.bbox) e.series_index = item.series;
  }
  for (const auto& item : L.legend) {
    VisualElement e;
    e.cls = ElementClass::legend_preview;
    e.bbox = item.preview;
    e.color = st.series_colors[item.series];
    e.series_index = item.series;
    ann.elements.push_back(e);
  }
  for (const auto& m : L.marks) {
    VisualElement e;
    e.cls = m.cls;
    e.bbox = m.box;
    e.color = m.color;
    e.series_index = m.series;
    e.x_index = m.x_index;
    ann.elements.push_back(e);
  }
  return out;
}

std::vector<std::string> validate_annotation(const PlotAnnotation& a) {
  std::vector<std::string> v;
  std::array<int, kNumClasses> counts{};
  for (const auto& e : a.elements) counts[static_cast<int>(e.cls)]++;
  auto count = [&](ElementClass c) { return counts[static_cast<int>(c)]; };
  for (auto c : {ElementClass::title, ElementClass::xaxis_label, ElementClass::yaxis_label}) {
    if (count(c) == 0) v.push_back("missing " + std::string(c == ElementClass::title ? "title" : to_string(c)));
    if (count(c) > 1) v.push_back("more than one " + std::string(to_string(c)));
  }
  const int nseries = static_cast<int>(a.gold_table.cols());
  const int ncat = static_cast<int>(a.gold_table.rows());
  if (count(ElementClass::legend_label) != nseries)
    v.push_back("legend label count " + std::to_string(count(ElementClass::legend_label)) +
                " differs from series count " + std::to_string(nseries));
  if (count(ElementClass::legend_preview) != nseries)
    v.push_back("legend preview count " + std::to_string(count(ElementClass::legend_preview)) +
                " differs from series count " + std::to_string(nseries));
  const ElementClass mark = is_bar(a.plot_type)                ? ElementClass::bar
                            : a.plot_type == PlotType::dotline ? ElementClass::dotline
                                                               : ElementClass::line;
  if (count(mark) != nseries * ncat)
    v.push_back(std::string(to_string(mark)) + " count " + std::to_string(count(mark)) +
                " differs from " + std::to_string(nseries * ncat));
  const BBox canvas{0, 0, static_cast<double>(a.style.canvas_width),
                    static_cast<double>(a.style.canvas_height)};
  for (size_t i = 0; i < a.elements.size(); ++i) {
    const auto& e = a.elements[i];
    const std::string name = "element " + std::to_string(i) + " (" + std::string(to_string(e.cls)) + ")";
    if (!(e.bbox.w > 0 && e.bbox.h > 0)) v.push_back(name + " has a degenerate bbox");
    if (!contains(canvas, e.bbox)) v.push_back(name + " bbox outside canvas");
    if (is_textual(e.cls) && !e.text) v.push_back(name + " lacks text");
    if (is_mark(e.cls) && !e.color) v.push_back(name + " lacks color");
  }
  return v;
}

}  // namespace plotqa::plotgen
