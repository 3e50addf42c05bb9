#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plotqa/common.hpp"
#include "plotqa/plotgen.hpp"

namespace plotqa::detsim {

using plotgen::ElementClass;
using plotgen::kNumClasses;

struct NoiseModel {
  double box_jitter_sigma = 0;  // px, per box edge
  // Additional per-edge sigma as a fraction of the box extent on that axis,
  // so large boxes are localised about as loosely as a detector would.
  double box_jitter_rel = 0;
  // Per-class multiplier on the jitter sigma, indexed by ElementClass.
  std::array<double, kNumClasses> class_sigma_scale{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  double drop_prob = 0;
  double misclass_prob = 0;
  double color_flip_prob = 0;  // mark color replaced by another palette id
  double ocr_char_sub_prob = 0;
  double ocr_truncate_prob = 0;
  double ocr_sign_digit_prob = 0;
  uint64_t seed = 0;

  bool is_zero() const;
  bool operator==(const NoiseModel&) const = default;
};

// Throws SchemaError when a probability is outside [0,1] or a sigma is negative.
void validate(const NoiseModel& n);
NoiseModel zero_noise();
NoiseModel paper_like_noise();
// "zero" or "paper-like"; throws Error otherwise.
NoiseModel noise_preset(std::string_view name);

struct Detection {
  ElementClass cls = ElementClass::title;
  BBox bbox;
  double score = 1;
  std::optional<std::string> text;
  std::optional<int> color;
  int source = -1;  // index of the originating annotation element (diagnostics only)
  bool operator==(const Detection&) const = default;
};

struct DetectionSet {
  std::vector<Detection> detections;
  // Style metadata carried alongside the boxes.
  plotgen::PlotType plot_type = plotgen::PlotType::vbar;
  bool grid = false;
  int canvas_width = 800;
  int canvas_height = 600;
  bool operator==(const DetectionSet&) const = default;
};

double iou(const BBox& a, const BBox& b);

// Exact copy of the annotation as detections with score 1.
DetectionSet from_annotation(const plotgen::PlotAnnotation& a);
DetectionSet perturb(const plotgen::PlotAnnotation& a, const NoiseModel& noise);

// OCR corruption. Truncation removes the last character, substitution swaps
// easily confused capitals and digits, and the sign/digit mode either adds a
// minus sign to a number or swaps one digit for a look-alike letter.
std::string corrupt_text(std::string_view s, const NoiseModel& noise, uint64_t seed);

enum class ApInterpolation { all_points, eleven_point };

struct ApResult {
  std::map<ElementClass, double> per_class;  // classes present in gold
  double map = 0;
};

ApResult average_precision(const DetectionSet& pred, const plotgen::PlotAnnotation& gold,
                           double iou_threshold,
                           ApInterpolation interp = ApInterpolation::all_points);

// Pools detections over many plots before computing AP, the usual way of
// scoring a detector on a dataset.
class ApAccumulator {
 public:
  explicit ApAccumulator(double iou_threshold,
                         ApInterpolation interp = ApInterpolation::all_points);
  void add(const DetectionSet& pred, const plotgen::PlotAnnotation& gold);
  // Pools another accumulator built with the same threshold.
  void merge(const ApAccumulator& other);
  ApResult result() const;

 private:
  struct Scored {
    double score;
    bool true_positive;
  };
  double threshold_;
  ApInterpolation interp_;
  std::array<std::vector<Scored>, kNumClasses> preds_;
  std::array<int, kNumClasses> gold_counts_{};
};

struct OcrResult {
  std::map<ElementClass, double> per_class;
  std::map<ElementClass, int> counts;
  double total = 0;
  int n = 0;
};
// Exact-match rate over aligned (class, predicted, gold) triples.
OcrResult ocr_accuracy(const std::vector<ElementClass>& classes,
                       const std::vector<std::string>& pred,
                       const std::vector<std::string>& gold);
// Pairs each surviving textual detection with its gold text via `source`
// and scores them.
OcrResult ocr_accuracy(const DetectionSet& pred, const plotgen::PlotAnnotation& gold);

}  // namespace plotqa::detsim
