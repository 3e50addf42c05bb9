#pragma once

// Dataset splits, answer scoring and evaluation reports.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plotqa/answer.hpp"
#include "plotqa/qgen.hpp"

namespace plotqa::harness {

inline constexpr double kRelativeTolerance = 0.05;

// Numeric answers are right when within 5% of the gold value (boundary
// included; a gold zero needs an exact zero). Everything else is compared as
// trimmed, case-folded text. Unavailable predictions are always wrong.
bool score_answer(const Answer& pred, const Answer& gold);

struct SplitSpec {
  std::array<double, 3> ratios{0.7, 0.15, 0.15};  // train, valid, test
  uint64_t seed = 0;
};
// Throws SchemaError unless ratios are non-negative and sum to 1.
void validate(const SplitSpec& s);
// "0.7,0.15,0.15"
SplitSpec parse_split(std::string_view ratios, uint64_t seed);

struct Split {
  std::vector<size_t> train, valid, test;
};
// Shuffled assignment of item indices 0..n-1.
Split split(size_t n, const SplitSpec& spec);

struct Cell {
  int correct = 0;
  int total = 0;
  std::optional<double> accuracy() const;
};

struct EvalReport {
  int n_questions = 0;
  int n_correct = 0;
  double overall_accuracy = 0;
  // [category][answer type]; structural x open_vocab is always reported NA.
  std::array<std::array<Cell, 3>, 3> grid{};
  // Perception diagnostics, filled in by the caller when available.
  std::optional<double> map50, map75, map90;
  std::optional<double> ocr_accuracy;
  std::optional<double> mean_table_f1;
  std::string system;
};

// `system(i)` answers question i. Requires a nonempty question set.
EvalReport evaluate(const std::vector<qgen::QuestionInstance>& questions,
                    const std::function<Answer(size_t)>& system);
// Adds the verdicts of `done` to `into` as if both were evaluated together.
void merge(EvalReport& into, const EvalReport& done);

std::string report_json(const EvalReport& r);
EvalReport report_from_json(std::string_view json);
std::string report_text(const EvalReport& r);

}  // namespace plotqa::harness
