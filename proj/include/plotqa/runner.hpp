#pragma once

// End-to-end commands over an on-disk dataset:
//
//   <dir>/plots/NNNN.svg         rendered plots
//   <dir>/annotations/NNNN.json  element boxes, style and gold table
//   <dir>/tables/NNNN.csv        gold tables
//   <dir>/questions.jsonl        questions with gold answers and split
//   <dir>/manifest.json          configuration and content hashes

#include <cstdint>
#include <string>
#include <vector>

#include "plotqa/harness.hpp"
#include "plotqa/hybrid.hpp"

namespace plotqa::runner {

struct GenerateConfig {
  std::string out_dir;
  int n_plots = 100;
  uint64_t seed = 0;
  std::string corpus_path;            // empty: built-in corpus
  std::string template_weights_path;  // empty: default weights
  harness::SplitSpec split;           // seed is taken from `seed`
  int threads = 0;                    // 0: hardware concurrency
};

struct GenerateResult {
  int n_plots = 0;
  int n_questions = 0;
  std::string manifest_hash;  // FNV-1a of manifest.json
};

// Throws Error for invalid configs, IoError for unwritable directories.
GenerateResult generate(const GenerateConfig& cfg);

struct RunConfig {
  std::string dataset_dir;
  std::string out_dir;  // predictions.jsonl, report.json, report.txt
  std::string noise = "paper-like";  // preset name or JSON file
  hybrid::System system = hybrid::System::hybrid;
  std::string split = "test";  // train, valid, test or all
  int threads = 0;
};

// Simulates perception on each plot of the split, answers its questions and
// scores them. The report also holds detection, OCR and extraction scores.
harness::EvalReport run(const RunConfig& cfg);

struct ExtractResult {
  SemiStructuredTable table;
  std::vector<std::string> warnings;
};
// Reads an annotation or detection JSON file. When `noise` is nonempty the
// detections are perturbed first.
ExtractResult extract_file(const std::string& path, const std::string& noise = "");

// Scores a predictions.jsonl file ({"id", "prediction": answer}) against the
// dataset's questions of the given split. Missing predictions count as wrong.
harness::EvalReport evaluate_predictions(const std::string& dataset_dir,
                                         const std::string& predictions_path,
                                         const std::string& split = "test");

// Plot file stem for an index: 0000, 0001, ...
std::string plot_stem(int index);

}  // namespace plotqa::runner
