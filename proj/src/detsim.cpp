#include "plotqa/detsim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace plotqa::detsim {

using plotgen::is_textual;

bool NoiseModel::is_zero() const {
  return box_jitter_sigma == 0 && box_jitter_rel == 0 && drop_prob == 0 && misclass_prob == 0 && color_flip_prob == 0 &&
         ocr_char_sub_prob == 0 && ocr_truncate_prob == 0 && ocr_sign_digit_prob == 0;
}

void validate(const NoiseModel& n) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0 && p <= 1))
      throw SchemaError(std::string("noise field '") + name + "' must be in [0,1]");
  };
  prob(n.drop_prob, "drop_prob");
  prob(n.misclass_prob, "misclass_prob");
  prob(n.color_flip_prob, "color_flip_prob");
  prob(n.ocr_char_sub_prob, "ocr_char_sub_prob");
  prob(n.ocr_truncate_prob, "ocr_truncate_prob");
  prob(n.ocr_sign_digit_prob, "ocr_sign_digit_prob");
  if (!(n.box_jitter_sigma >= 0)) throw SchemaError("noise field 'box_jitter_sigma' must be >= 0");
  if (!(n.box_jitter_rel >= 0)) throw SchemaError("noise field 'box_jitter_rel' must be >= 0");
  for (double s : n.class_sigma_scale)
    if (!(s >= 0)) throw SchemaError("noise field 'class_sigma_scale' entries must be >= 0");
}

NoiseModel zero_noise() { return {}; }

NoiseModel paper_like_noise() {
  // Jitter sigmas come from the plotqa_calibrate grid search; the class shape
  // makes titles and line vertices the hardest elements to localise tightly.
  NoiseModel n;
  n.box_jitter_sigma = 0.2;
  n.box_jitter_rel = 0.02;
  // title, bar, line, dotline, xaxis_label, yaxis_label, xtick_label,
  // ytick_label, legend_label, legend_preview
  n.class_sigma_scale = {1.5, 1.0, 2.0, 1.5, 0.3, 0.3, 0.3, 0.3, 0.4, 0.3};
  n.drop_prob = 0.01;
  n.misclass_prob = 0.005;
  n.color_flip_prob = 0.01;
  n.ocr_char_sub_prob = 0.005;
  n.ocr_truncate_prob = 0.01;
  n.ocr_sign_digit_prob = 0.005;
  n.seed = 2020;
  return n;
}

NoiseModel noise_preset(std::string_view name) {
  if (name == "zero") return zero_noise();
  if (name == "paper-like") return paper_like_noise();
  throw Error("unknown noise preset '" + std::string(name) + "'");
}

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return a == b ? 1.0 : 0.0;
  if (a == b) return 1.0;
  return inter / uni;
}

DetectionSet from_annotation(const plotgen::PlotAnnotation& a) {
  DetectionSet d;
  d.plot_type = a.plot_type;
  d.grid = a.style.grid;
  d.canvas_width = a.style.canvas_width;
  d.canvas_height = a.style.canvas_height;
  for (size_t i = 0; i < a.elements.size(); ++i) {
    const auto& e = a.elements[i];
    d.detections.push_back({e.cls, e.bbox, 1.0, e.text, e.color, static_cast<int>(i)});
  }
  return d;
}

namespace {

char substitute(char c) {
  switch (c) {
    case 'O': return 'D';
    case 'D': return 'O';
    case 'I': return 'l';
    case 'B': return '8';
    case 'S': return '5';
    case 'Z': return '2';
    case 'G': return 'C';
    case 'C': return 'G';
    case 'E': return 'F';
    case 'F': return 'E';
    case 'P': return 'R';
    case 'R': return 'P';
    case 'U': return 'V';
    case 'V': return 'U';
    case 'M': return 'N';
    case 'N': return 'M';
    case 'Q': return 'O';
    default: return 0;
  }
}

char digit_lookalike(char c) {
  switch (c) {
    case '0': return 'O';
    case '1': return 'I';
    case '2': return 'Z';
    case '5': return 'S';
    case '6': return 'G';
    case '8': return 'B';
    default: return 0;
  }
}

ElementClass misclassify(ElementClass c, Rng& rng) {
  static constexpr ElementClass kMarks[] = {ElementClass::bar, ElementClass::line,
                                            ElementClass::dotline, ElementClass::legend_preview};
  static constexpr ElementClass kText[] = {ElementClass::title,       ElementClass::xaxis_label,
                                           ElementClass::yaxis_label, ElementClass::xtick_label,
                                           ElementClass::ytick_label, ElementClass::legend_label};
  std::vector<ElementClass> pool;
  if (is_textual(c)) pool.assign(std::begin(kText), std::end(kText));
  else pool.assign(std::begin(kMarks), std::end(kMarks));
  pool.erase(std::remove(pool.begin(), pool.end(), c), pool.end());
  return pool[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(pool.size()) - 1))];
}

}  // namespace

std::string corrupt_text(std::string_view s, const NoiseModel& noise, uint64_t seed) {
  std::string out(s);
  if (out.empty()) return out;
  Rng rng(seed);
  if (noise.ocr_sign_digit_prob > 0 && rng.bernoulli(noise.ocr_sign_digit_prob)) {
    std::vector<size_t> digits;
    for (size_t i = 0; i < out.size(); ++i)
      if (digit_lookalike(out[i])) digits.push_back(i);
    const bool numeric = parse_number(out).has_value() && out[0] != '-';
    const bool flip_sign = numeric && (digits.empty() || rng.bernoulli(0.5));
    if (flip_sign) {
      out.insert(out.begin(), '-');
    } else if (!digits.empty()) {
      const size_t i = digits[rng.uniform_int(0, static_cast<int64_t>(digits.size()) - 1)];
      out[i] = digit_lookalike(out[i]);
    }
  }
  if (noise.ocr_char_sub_prob > 0) {
    for (char& c : out) {
      const char sub = substitute(c);
      if (sub && rng.bernoulli(noise.ocr_char_sub_prob)) c = sub;
    }
  }
  if (noise.ocr_truncate_prob > 0 && out.size() > 1 && rng.bernoulli(noise.ocr_truncate_prob))
    out.pop_back();
  return out;
}

DetectionSet perturb(const plotgen::PlotAnnotation& a, const NoiseModel& noise) {
  validate(noise);
  DetectionSet d = from_annotation(a);
  if (noise.is_zero()) return d;
  std::vector<Detection> kept;
  for (size_t i = 0; i < d.detections.size(); ++i) {
    Detection det = d.detections[i];
    Rng rng(derive_seed(noise.seed, "element", i));
    if (rng.bernoulli(noise.drop_prob)) continue;
    const ElementClass original = det.cls;
    const bool misclassified = rng.bernoulli(noise.misclass_prob);
    if (misclassified) det.cls = misclassify(det.cls, rng);

    const double scale = noise.class_sigma_scale[static_cast<int>(original)];
    const double sx = scale * (noise.box_jitter_sigma + noise.box_jitter_rel * det.bbox.w);
    const double sy = scale * (noise.box_jitter_sigma + noise.box_jitter_rel * det.bbox.h);
    double moved = 0;
    if (sx > 0 || sy > 0) {
      double x0 = det.bbox.x, y0 = det.bbox.y, x1 = det.bbox.right(), y1 = det.bbox.bottom();
      const double dx0 = rng.normal(0, sx), dy0 = rng.normal(0, sy);
      const double dx1 = rng.normal(0, sx), dy1 = rng.normal(0, sy);
      x0 += dx0;
      y0 += dy0;
      x1 += dx1;
      y1 += dy1;
      if (x1 - x0 < 0.1) x1 = x0 + 0.1;
      if (y1 - y0 < 0.1) y1 = y0 + 0.1;
      det.bbox = {x0, y0, x1 - x0, y1 - y0};
      // Localisation error relative to the box size.
      moved = (std::fabs(dx0) + std::fabs(dx1)) / std::max(det.bbox.w, 1.0) +
              (std::fabs(dy0) + std::fabs(dy1)) / std::max(det.bbox.h, 1.0);
    }
    // Confidence falls with localisation error and with a wrong label.
    det.score = 0.55 + 0.45 * std::exp(-4 * moved) - 0.02 * rng.uniform();
    if (misclassified) det.score *= 0.6;
    det.score = std::clamp(det.score, 1e-3, 1.0);

    if (det.text) det.text = corrupt_text(*det.text, noise, derive_seed(noise.seed, "ocr", i));
    if (det.color && rng.bernoulli(noise.color_flip_prob))
      det.color = (*det.color + 1 + rng.uniform_int(0, plotgen::kPaletteSize - 2)) %
                  plotgen::kPaletteSize;
    kept.push_back(std::move(det));
  }
  d.detections = std::move(kept);
  return d;
}

// ---- Average precision ---------------------------------------------------

namespace {

double ap_from_curve(std::vector<std::pair<double, bool>> scored, int n_gold,
                     ApInterpolation interp) {
  if (n_gold == 0) return 0;
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> precision, recall;
  int tp = 0, fp = 0;
  for (const auto& [score, hit] : scored) {
    (hit ? tp : fp)++;
    precision.push_back(static_cast<double>(tp) / (tp + fp));
    recall.push_back(static_cast<double>(tp) / n_gold);
  }
  if (interp == ApInterpolation::eleven_point) {
    double sum = 0;
    for (int k = 0; k <= 10; ++k) {
      const double r = k / 10.0;
      double best = 0;
      for (size_t i = 0; i < recall.size(); ++i)
        if (recall[i] >= r - 1e-12) best = std::max(best, precision[i]);
      sum += best;
    }
    return sum / 11;
  }
  // Area under the monotone precision envelope.
  for (size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0, prev_recall = 0;
  for (size_t i = 0; i < recall.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

// Greedy one-to-one matching in score order; returns (score, is_tp) per
// prediction of the class.
std::vector<std::pair<double, bool>> match_class(const DetectionSet& pred,
                                                 const plotgen::PlotAnnotation& gold,
                                                 ElementClass cls, double thr, int* n_gold) {
  std::vector<const BBox*> g;
  for (const auto& e : gold.elements)
    if (e.cls == cls) g.push_back(&e.bbox);
  *n_gold = static_cast<int>(g.size());
  std::vector<const Detection*> p;
  for (const auto& d : pred.detections)
    if (d.cls == cls) p.push_back(&d);
  std::stable_sort(p.begin(), p.end(),
                   [](const Detection* a, const Detection* b) { return a->score > b->score; });
  std::vector<bool> used(g.size(), false);
  std::vector<std::pair<double, bool>> out;
  for (const Detection* d : p) {
    double best = -1;
    int best_j = -1;
    for (size_t j = 0; j < g.size(); ++j) {
      if (used[j]) continue;
      const double v = iou(d->bbox, *g[j]);
      if (v > best) {
        best = v;
        best_j = static_cast<int>(j);
      }
    }
    const bool hit = best_j >= 0 && best >= thr;
    if (hit) used[best_j] = true;
    out.push_back({d->score, hit});
  }
  return out;
}

}  // namespace

ApResult average_precision(const DetectionSet& pred, const plotgen::PlotAnnotation& gold,
                           double iou_threshold, ApInterpolation interp) {
  ApAccumulator acc(iou_threshold, interp);
  acc.add(pred, gold);
  return acc.result();
}

ApAccumulator::ApAccumulator(double iou_threshold, ApInterpolation interp)
    : threshold_(iou_threshold), interp_(interp) {
  if (!(iou_threshold > 0 && iou_threshold < 1)) throw Error("IOU threshold must be in (0,1)");
}

void ApAccumulator::add(const DetectionSet& pred, const plotgen::PlotAnnotation& gold) {
  for (auto cls : plotgen::kElementClasses) {
    int n_gold = 0;
    const auto m = match_class(pred, gold, cls, threshold_, &n_gold);
    const int k = static_cast<int>(cls);
    gold_counts_[k] += n_gold;
    for (const auto& [s, hit] : m) preds_[k].push_back({s, hit});
  }
}

void ApAccumulator::merge(const ApAccumulator& o) {
  if (o.threshold_ != threshold_) throw Error("ApAccumulator::merge: thresholds differ");
  for (int k = 0; k < kNumClasses; ++k) {
    gold_counts_[k] += o.gold_counts_[k];
    preds_[k].insert(preds_[k].end(), o.preds_[k].begin(), o.preds_[k].end());
  }
}

ApResult ApAccumulator::result() const {
  ApResult r;
  double sum = 0;
  for (auto cls : plotgen::kElementClasses) {
    const int k = static_cast<int>(cls);
    if (gold_counts_[k] == 0) continue;
    std::vector<std::pair<double, bool>> scored;
    for (const auto& s : preds_[k]) scored.push_back({s.score, s.true_positive});
    const double ap = ap_from_curve(std::move(scored), gold_counts_[k], interp_);
    r.per_class[cls] = ap;
    sum += ap;
  }
  r.map = r.per_class.empty() ? 0 : sum / r.per_class.size();
  return r;
}

// ---- OCR -----------------------------------------------------------------

OcrResult ocr_accuracy(const std::vector<ElementClass>& classes,
                       const std::vector<std::string>& pred,
                       const std::vector<std::string>& gold) {
  if (pred.size() != gold.size() || classes.size() != gold.size())
    throw Error("ocr_accuracy: length mismatch");
  OcrResult r;
  std::map<ElementClass, int> hits;
  int total_hits = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    const bool ok = pred[i] == gold[i];
    r.counts[classes[i]]++;
    hits[classes[i]] += ok;
    total_hits += ok;
  }
  for (const auto& [c, n] : r.counts) r.per_class[c] = static_cast<double>(hits[c]) / n;
  r.n = static_cast<int>(gold.size());
  r.total = r.n ? static_cast<double>(total_hits) / r.n : 1.0;
  return r;
}

OcrResult ocr_accuracy(const DetectionSet& pred, const plotgen::PlotAnnotation& gold) {
  std::vector<ElementClass> classes;
  std::vector<std::string> p, g;
  for (const auto& d : pred.detections) {
    if (d.source < 0 || d.source >= static_cast<int>(gold.elements.size())) continue;
    const auto& e = gold.elements[d.source];
    if (!e.text || !d.text) continue;
    classes.push_back(e.cls);
    p.push_back(*d.text);
    g.push_back(*e.text);
  }
  return ocr_accuracy(classes, p, g);
}

}  // namespace plotqa::detsim
