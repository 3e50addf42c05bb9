#include "doctest.h"
#include "plotqa/corpus.hpp"
#include "plotqa/plotgen.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace plotqa;
using namespace plotqa::plotgen;

TEST_CASE("nice value axis") {
  auto a = nice_value_axis(87);
  CHECK(a.max == doctest::Approx(100));
  CHECK(a.ticks.size() >= 5);
  CHECK(a.ticks.size() <= 10);
  CHECK(a.ticks.front() == 0);
  CHECK(a.ticks.back() == doctest::Approx(100));
  a = nice_value_axis(0);
  CHECK(a.max == 1);
  a = nice_value_axis(2.3);
  CHECK(a.max == doctest::Approx(2.5));
  a = nice_value_axis(3.4e15);
  CHECK(a.max == doctest::Approx(5e15));
  // Property: max is the smallest nice number at or above the data, and the
  // tick count is always in [5, 10].
  for (double x = 0.013; x < 1e16; x *= 1.37) {
    const auto ax = nice_value_axis(x);
    CHECK(ax.max >= x);
    CHECK(ax.max < 2.01 * x);
    CHECK(ax.ticks.size() >= 5);
    CHECK(ax.ticks.size() <= 10);
  }
}

TEST_CASE("tick labels") {
  CHECK(tick_label(0.5, 0.5, TickNotation::standard) == "0.5");
  CHECK(tick_label(20, 5, TickNotation::standard) == "20");
  CHECK(tick_label(0.25, 0.25, TickNotation::standard) == "0.25");
  CHECK(tick_label(200000, 50000, TickNotation::scientific_e) == "2.000e+5");
}

TEST_CASE("palette has 73 distinct colors") {
  std::set<std::string_view> hex, names;
  for (const auto& c : palette()) {
    hex.insert(c.hex);
    names.insert(c.name);
  }
  CHECK(hex.size() == kPaletteSize);
  CHECK(names.size() == kPaletteSize);
}

TEST_CASE("enum string round trips") {
  for (auto t : kPlotTypes) CHECK(plot_type_from_string(to_string(t)) == t);
  for (auto c : kElementClasses) CHECK(element_class_from_string(to_string(c)) == c);
  for (auto p : kLegendPositions) CHECK(legend_position_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(plot_type_from_string("pie"), SchemaError);
}

TEST_CASE("rendered annotations are valid across many plots") {
  const auto& c = corpus::default_corpus();
  std::map<PlotType, int> types;
  int sci = 0;
  for (uint64_t seed = 0; seed < 600; ++seed) {
    const auto data = corpus::sample_plot_data(c, seed);
    const auto spec = make_plot_spec(data, seed * 31 + 7);
    Rendered r;
    REQUIRE_NOTHROW(r = render(spec));
    const auto problems = validate_annotation(r.annotation);
    REQUIRE_MESSAGE(problems.empty(), problems.front());
    CHECK(r.annotation.gold_table == gold_table(data));
    CHECK(r.svg.find("<svg") != std::string::npos);
    types[spec.plot_type]++;
    sci += spec.style.tick_notation == TickNotation::scientific_e;
    std::set<int> colors(spec.style.series_colors.begin(), spec.style.series_colors.end());
    CHECK(colors.size() == data.series.size());
  }
  for (auto t : kPlotTypes) CHECK(types[t] > 60);
  CHECK(types[PlotType::vbar] > types[PlotType::line]);
  CHECK(sci > 0);
}

TEST_CASE("bar geometry encodes values") {
  const auto& c = corpus::default_corpus();
  for (uint64_t seed = 0; seed < 200; ++seed) {
    auto spec = make_plot_spec(corpus::sample_plot_data(c, seed), seed);
    if (!is_bar(spec.plot_type)) continue;
    const auto r = render(spec);
    const auto axis = nice_value_axis([&] {
      double m = 0;
      for (const auto& s : spec.data.series)
        for (double v : s.values) m = std::max(m, v);
      return m;
    }());
    // Ratio between any two bar extents equals the ratio of values.
    double ref_len = -1, ref_val = 0;
    for (const auto& e : r.annotation.elements) {
      if (e.cls != ElementClass::bar) continue;
      const double v = spec.data.series[*e.series_index].values[*e.x_index];
      const double len = spec.plot_type == PlotType::vbar ? e.bbox.h : e.bbox.w;
      if (v == 0) {
        CHECK(len < kZeroExtentPx);
        continue;
      }
      if (ref_len < 0) {
        ref_len = len;
        ref_val = v;
      } else {
        CHECK(len / ref_len == doctest::Approx(v / ref_val).epsilon(1e-9));
      }
    }
    (void)axis;
  }
}

TEST_CASE("validate_annotation reports broken annotations") {
  const auto spec = make_plot_spec(corpus::sample_plot_data(corpus::default_corpus(), 3), 3);
  auto ann = render(spec).annotation;
  ann.elements.erase(ann.elements.begin());  // drop the title
  CHECK_FALSE(validate_annotation(ann).empty());
  ann = render(spec).annotation;
  ann.elements.back().bbox.x = -50;
  CHECK_FALSE(validate_annotation(ann).empty());
}

TEST_CASE("layout errors are raised for impossible canvases") {
  auto spec = make_plot_spec(corpus::sample_plot_data(corpus::default_corpus(), 4), 4);
  spec.style.canvas_width = 120;
  spec.style.canvas_height = 100;
  CHECK_THROWS_AS(render(spec), LayoutError);
}

TEST_CASE("rendering is byte deterministic") {
  const auto spec = make_plot_spec(corpus::sample_plot_data(corpus::default_corpus(), 8), 8);
  CHECK(render(spec).svg == render(spec).svg);
}
