#include "doctest.h"
#include "plotqa/corpus.hpp"
#include "plotqa/harness.hpp"
#include "plotqa/hybrid.hpp"
#include "plotqa/qgen.hpp"

using namespace plotqa;
using namespace plotqa::hybrid;
using plotgen::ElementClass;
using plotgen::PlotType;

namespace {

plotgen::PlotSpec spec_for(uint64_t seed) {
  return plotgen::make_plot_spec(corpus::sample_plot_data(corpus::default_corpus(), seed), seed);
}

// First generated plot matching the predicate.
template <class Pred>
plotgen::PlotSpec find_spec(Pred pred) {
  for (uint64_t s = 0; s < 5000; ++s) {
    auto spec = spec_for(s);
    if (pred(spec)) return spec;
  }
  FAIL("no matching plot");
  return {};
}

}  // namespace

TEST_CASE("routing examples") {
  CHECK(route("How many legend labels are there?").branch == Branch::classification);
  CHECK(route("Does the graph contain grids?").branch == Branch::classification);
  const auto r = route("What is the ratio of the price of diesel in Lebanon in 2010 to that in 2014?");
  CHECK(r.branch == Branch::pipeline);
  CHECK(r.template_id != 0);
  CHECK(route("hello world").branch == Branch::pipeline);
  CHECK(route("hello world").template_id == 0);
  CHECK(route("Does the price of diesel in Lebanon monotonically increase over the years?").branch ==
        Branch::classification);
}

TEST_CASE("routing follows category and answer type for every generated question") {
  for (uint64_t s = 0; s < 150; ++s) {
    const auto spec = spec_for(s);
    for (const auto& q : qgen::instantiate(spec, qgen::default_templates(), s)) {
      const bool cls = q.category == qgen::Category::structural ||
                       q.answer_type == qgen::AnswerType::yes_no;
      CHECK(route(q.text).branch == (cls ? Branch::classification : Branch::pipeline));
    }
  }
}

TEST_CASE("bars on the second tick from the top of a horizontal bar chart") {
  const auto spec = find_spec([](const plotgen::PlotSpec& s) {
    return s.plot_type == PlotType::hbar && s.data.series.size() == 2;
  });
  PlotView v(detsim::from_annotation(plotgen::render(spec).annotation));
  const auto a = answer("How many bars are there on the 2nd tick from the top?", v);
  CHECK(a == Answer::of_number(2));
  CHECK(answer("Are all the bars in the graph horizontal?", v) == Answer::yes_no(true));
}

TEST_CASE("legend stacking") {
  const auto spec = find_spec([](const plotgen::PlotSpec& s) {
    return s.data.series.size() >= 2 && plotgen::legend_is_horizontal(s.style.legend_position);
  });
  PlotView v(detsim::from_annotation(plotgen::render(spec).annotation));
  CHECK(answer("How are the legend labels stacked?", v) == Answer::of_text("horizontal"));
  CHECK(answer("Where does the legend appear in the graph?", v) ==
        Answer::of_text(qgen::legend_position_answer(spec.style.legend_position)));
}

TEST_CASE("parallel constant lines never intersect") {
  auto spec = find_spec([](const plotgen::PlotSpec& s) {
    return s.plot_type == PlotType::line && s.data.series.size() == 3;
  });
  for (size_t k = 0; k < spec.data.series.size(); ++k)
    for (auto& x : spec.data.series[k].values) x = spec.data.indicator.min + (k + 1) * 0.2 *
                                                   (spec.data.indicator.max - spec.data.indicator.min);
  PlotView v(detsim::from_annotation(plotgen::render(spec).annotation));
  CHECK(answer("How many lines intersect with each other?", v) == Answer::of_number(0));
}

TEST_CASE("structural answers survive noise that keeps the counts") {
  auto noise = detsim::paper_like_noise();
  noise.drop_prob = 0;
  noise.misclass_prob = 0;
  noise.color_flip_prob = 0;
  int compared = 0;
  for (uint64_t s = 0; s < 80; ++s) {
    const auto spec = spec_for(s);
    const auto a = plotgen::render(spec).annotation;
    noise.seed = s;
    PlotView clean(detsim::from_annotation(a));
    PlotView noisy(detsim::perturb(a, noise));
    for (const char* q : {"How many legend labels are there?", "Does the graph contain grids?",
                          "How many different colored bars are there?",
                          "How many different colored lines are there?"}) {
      const auto c = answer(q, clean);
      if (!c.available()) continue;
      CHECK(answer(q, noisy) == c);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("zero-noise hybrid answers every generated question") {
  int total = 0, ok = 0, ok_pipeline = 0, ok_cls = 0;
  for (uint64_t s = 0; s < 300; ++s) {
    const auto spec = spec_for(s);
    PlotView v(detsim::perturb(plotgen::render(spec).annotation, detsim::zero_noise()));
    for (const auto& q : qgen::instantiate(spec, qgen::default_templates(), s)) {
      ++total;
      const bool right = harness::score_answer(answer(q.text, v), q.gold);
      CHECK_MESSAGE(right, "seed " << s << ": " << q.text);
      ok += right;
      ok_pipeline += harness::score_answer(answer(q.text, v, System::pipeline_only), q.gold);
      ok_cls += harness::score_answer(answer(q.text, v, System::classification_only), q.gold);
    }
  }
  CHECK(ok == total);
  CHECK(ok_pipeline < ok);
  CHECK(ok_cls < ok);
}

TEST_CASE("corrupted header gives an unavailable or wrong answer, never a crash") {
  const auto spec = find_spec([](const plotgen::PlotSpec& s) {
    return s.data.series.size() >= 2 && s.data.x_label == "Year" &&
           s.data.x_categories[0] == "2008";
  });
  auto d = detsim::from_annotation(plotgen::render(spec).annotation);
  for (auto& x : d.detections)
    if (x.text && *x.text == "2008") x.text = "200B";
  PlotView v(std::move(d));
  const std::string q = "What is the " + spec.data.indicator.unit_phrase + " in " +
                        spec.data.series[0].legend_label + " in 2008?";
  Answer a;
  CHECK_NOTHROW(a = answer(q, v));
  CHECK_FALSE(harness::score_answer(a, Answer::of_number(spec.data.series[0].values[0])));
}

TEST_CASE("empty detections") {
  PlotView v(detsim::DetectionSet{});
  CHECK_FALSE(answer("How many legend labels are there?", v) == Answer::of_number(3));
  CHECK_FALSE(answer("What is the title of the graph?", v).available());
  CHECK_FALSE(answer("hello world", v).available());
  CHECK(system_from_string("pipeline") == System::pipeline_only);
  CHECK_THROWS(system_from_string("oracle"));
}
