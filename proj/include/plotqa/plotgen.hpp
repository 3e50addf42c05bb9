#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plotqa/common.hpp"
#include "plotqa/corpus.hpp"
#include "plotqa/table.hpp"

namespace plotqa::plotgen {

enum class PlotType { vbar, hbar, line, dotline };
inline constexpr std::array kPlotTypes = {PlotType::vbar, PlotType::hbar, PlotType::line,
                                          PlotType::dotline};
std::string_view to_string(PlotType t);
PlotType plot_type_from_string(std::string_view s);
inline bool is_bar(PlotType t) { return t == PlotType::vbar || t == PlotType::hbar; }

enum class TickNotation { standard, scientific_e };
enum class LineStyle { solid, dashed, dotted, dashdot };
enum class Marker { asterisk, circle, diamond, square, triangle, inverted_triangle };
enum class LegendPosition { bottom_left, bottom_centre, bottom_right, center_right, top_right };

inline constexpr std::array kLegendPositions = {
    LegendPosition::bottom_left, LegendPosition::bottom_centre, LegendPosition::bottom_right,
    LegendPosition::center_right, LegendPosition::top_right};

std::string_view to_string(TickNotation n);
std::string_view to_string(LineStyle s);
std::string_view to_string(Marker m);
std::string_view to_string(LegendPosition p);
TickNotation tick_notation_from_string(std::string_view s);
LineStyle line_style_from_string(std::string_view s);
Marker marker_from_string(std::string_view s);
LegendPosition legend_position_from_string(std::string_view s);
inline bool legend_is_horizontal(LegendPosition p) {
  return p == LegendPosition::bottom_left || p == LegendPosition::bottom_centre ||
         p == LegendPosition::bottom_right;
}

struct PaletteColor {
  std::string_view name;
  std::string_view hex;
};
inline constexpr int kPaletteSize = 73;
const std::array<PaletteColor, kPaletteSize>& palette();

struct StyleParams {
  bool grid = false;
  double font_size = 10;  // points
  TickNotation tick_notation = TickNotation::standard;
  LineStyle line_style = LineStyle::solid;
  Marker marker = Marker::circle;
  LegendPosition legend_position = LegendPosition::top_right;
  std::vector<int> series_colors;  // palette ids
  int canvas_width = 800;
  int canvas_height = 600;

  bool operator==(const StyleParams&) const = default;
};

struct PlotSpec {
  corpus::PlotData data;
  PlotType plot_type = PlotType::vbar;
  StyleParams style;
  bool operator==(const PlotSpec&) const = default;
};

enum class ElementClass {
  title,
  bar,
  line,
  dotline,
  xaxis_label,
  yaxis_label,
  xtick_label,
  ytick_label,
  legend_label,
  legend_preview,
};
inline constexpr int kNumClasses = 10;
inline constexpr std::array kElementClasses = {
    ElementClass::title,       ElementClass::bar,         ElementClass::line,
    ElementClass::dotline,     ElementClass::xaxis_label, ElementClass::yaxis_label,
    ElementClass::xtick_label, ElementClass::ytick_label, ElementClass::legend_label,
    ElementClass::legend_preview};
std::string_view to_string(ElementClass c);
ElementClass element_class_from_string(std::string_view s);
bool is_textual(ElementClass c);
bool is_mark(ElementClass c);  // bar, line, dotline, legend_preview

struct VisualElement {
  ElementClass cls = ElementClass::title;
  BBox bbox;
  std::optional<std::string> text;
  std::optional<int> color;
  std::optional<int> series_index;
  std::optional<int> x_index;
  bool operator==(const VisualElement&) const = default;
};

struct PlotAnnotation {
  std::vector<VisualElement> elements;
  StyleParams style;
  PlotType plot_type = PlotType::vbar;
  SemiStructuredTable gold_table;
};

// Value axis: starts at zero, ends at the smallest nice number >= data max.
struct ValueAxis {
  double max = 1;
  double step = 0.2;
  std::vector<double> ticks;  // 0, step, ..., max
};
ValueAxis nice_value_axis(double data_max);
std::string tick_label(double value, double step, TickNotation notation);

// Text extent model shared by layout and the annotation.
double text_width(std::string_view text, double font_px);
double text_height(double font_px);
inline double font_px(double points) { return points * 4.0 / 3.0; }

// Table implied by the data: rows = x categories, cols = legend labels.
SemiStructuredTable gold_table(const corpus::PlotData& data);

PlotSpec make_plot_spec(const corpus::PlotData& data, uint64_t seed);

struct Rendered {
  std::string svg;
  PlotAnnotation annotation;
};
Rendered render(const PlotSpec& spec);

// Empty iff every PlotAnnotation invariant holds.
std::vector<std::string> validate_annotation(const PlotAnnotation& a);

// Pixel extent below which a bar is treated as zero height.
inline constexpr double kZeroExtentPx = 0.01;

}  // namespace plotqa::plotgen
