#pragma once

// Question routing and the two answering branches.

#include <optional>
#include <string>
#include <string_view>

#include "plotqa/answer.hpp"
#include "plotqa/detsim.hpp"
#include "plotqa/sie.hpp"
#include "plotqa/templates.hpp"

namespace plotqa::hybrid {

enum class Branch { classification, pipeline };
std::string_view to_string(Branch b);

struct Route {
  Branch branch = Branch::pipeline;
  int template_id = 0;  // 0 when the question did not parse
  std::string reason;
};

// Pure function of the question text. Structural and yes/no questions go to
// the classification branch; everything else, including unparseable text,
// goes to the pipeline.
Route route(std::string_view question);

// Which branches a system may use; the single-branch systems exist for
// ablation runs.
enum class System { hybrid, pipeline_only, classification_only };
std::string_view to_string(System s);
System system_from_string(std::string_view s);

// Detections of one plot with the table extracted from them. Build once and
// reuse for every question about the plot.
class PlotView {
 public:
  explicit PlotView(detsim::DetectionSet d);
  PlotView(const PlotView&) = delete;
  PlotView& operator=(const PlotView&) = delete;
  const detsim::DetectionSet& detections() const { return d_; }
  const sie::Extraction& extraction() const { return ex_; }
  const SemiStructuredTable& table() const { return ex_.table; }

  bool value_vertical() const { return d_.plot_type != plotgen::PlotType::hbar; }
  const std::vector<sie::Tick>& categories() const { return categories_; }
  const std::vector<const detsim::Detection*>& legend_labels() const { return legend_labels_; }
  const std::map<std::string, int>& legend() const { return legend_; }
  // Data marks with their nearest categorical tick (row index), if any.
  struct Mark {
    const detsim::Detection* det;
    std::optional<size_t> row;
  };
  const std::vector<Mark>& marks() const { return marks_; }
  // Colors that identify a data series: those of at least two marks, or
  // every mark color when there is a single category.
  const std::vector<int>& series_colors() const { return series_colors_; }
  const detsim::Detection* text_of(plotgen::ElementClass c) const;

 private:
  detsim::DetectionSet d_;
  sie::Extraction ex_;
  std::vector<sie::Tick> categories_;
  std::vector<const detsim::Detection*> legend_labels_;
  std::map<std::string, int> legend_;
  std::vector<Mark> marks_;
  std::vector<int> series_colors_;
};

// Structural templates answered from element counts, positions and style
// metadata. Unavailable when the needed elements are missing.
Answer answer_structural(int template_id, const qgen::Bindings& b, const PlotView& v);

// Retrieval questions whose answer is a piece of text read off the plot or a
// count over it (legend order, tick labels, axis titles, tick spacing).
std::optional<Answer> answer_visual_lookup(int template_id, const qgen::Bindings& b,
                                           const PlotView& v);

Answer answer(std::string_view question, const PlotView& v, System system = System::hybrid);
inline Answer answer(std::string_view question, const detsim::DetectionSet& d,
                     System system = System::hybrid) {
  return answer(question, PlotView(d), system);
}

}  // namespace plotqa::hybrid
