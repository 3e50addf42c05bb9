#pragma once

// JSON forms of the artifacts written to and read from disk. Readers throw
// SchemaError on malformed input.

#include <string>
#include <string_view>
#include <vector>

#include "plotqa/answer.hpp"
#include "plotqa/detsim.hpp"
#include "plotqa/harness.hpp"
#include "plotqa/plotgen.hpp"
#include "plotqa/qgen.hpp"
#include "plotqa/table.hpp"

namespace plotqa::io {

std::string table_to_json(const SemiStructuredTable& t);
SemiStructuredTable table_from_json(std::string_view s);

std::string answer_to_json(const Answer& a);
Answer answer_from_json(std::string_view s);

std::string annotation_to_json(const plotgen::PlotAnnotation& a);
plotgen::PlotAnnotation annotation_from_json(std::string_view s);

std::string detections_to_json(const detsim::DetectionSet& d);
detsim::DetectionSet detections_from_json(std::string_view s);

// Fields absent from the JSON keep their zero-noise defaults; unknown fields
// are rejected.
std::string noise_to_json(const detsim::NoiseModel& n);
detsim::NoiseModel noise_from_json(std::string_view s);
// A preset name, or a path to a JSON noise file.
detsim::NoiseModel load_noise(const std::string& preset_or_path);

// One question per line of questions.jsonl.
struct StoredQuestion {
  std::string id;  // "<plot>-<n>"
  int plot = 0;
  std::string split;  // train / valid / test
  qgen::QuestionInstance q;
};
std::string question_to_json(const StoredQuestion& q);
StoredQuestion question_from_json(std::string_view line);
std::vector<StoredQuestion> questions_from_jsonl(std::string_view text);

}  // namespace plotqa::io
