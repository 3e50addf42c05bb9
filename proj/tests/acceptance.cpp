// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "plotqa/corpus.hpp"
#include "plotqa/detsim.hpp"
#include "plotqa/harness.hpp"
#include "plotqa/hybrid.hpp"
#include "plotqa/plotgen.hpp"
#include "plotqa/qgen.hpp"
#include "plotqa/sie.hpp"
#include "plotqa/tableqa.hpp"

using namespace plotqa;

namespace {

// Pinned tolerances and sizes.
constexpr uint64_t kSeed = 20260101;  // not a seed used by calibration
constexpr int kRoundTripPlots = 1000;
constexpr double kRoundTripTupleTol = 0.005;
constexpr double kRoundTripMaxSeconds = 120;
constexpr int kOracleTables = 10000;
constexpr int kParserMinPerTemplate = 20;
constexpr int kApSets = 100;
constexpr int kCalibrationPlots = 1000;
constexpr double kMap50Lo = 0.94, kMap50Hi = 0.99;
constexpr double kMap90Lo = 0.62, kMap90Hi = 0.82;
constexpr double kF1Lo = 0.58, kF1Hi = 0.78;
constexpr int kAblationPlots = 1000;
constexpr int kOcrBatch = 100000;
constexpr double kOcrClean = 0.97, kOcrTol = 0.002;
constexpr int kDistributionQuestions = 100000;
constexpr double kDistributionTolPp = 10;

// Answer-type shares within each question category, in percent, as
// published for the reference dataset: rows are structural, data retrieval,
// reasoning; columns yes/no, fixed vocabulary, open vocabulary.
constexpr double kPublishedShares[3][3] = {
    {36.99, 63.01, 0.00},
    {5.19, 18.52, 76.29},
    {2.05, 15.92, 82.03},
};

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Plot {
  plotgen::PlotSpec spec;
  plotgen::Rendered rendered;
};

Plot make_plot(uint64_t seed, int i) {
  const auto data = corpus::sample_plot_data(corpus::default_corpus(), derive_seed(seed, "data", i));
  Plot p{plotgen::make_plot_spec(data, derive_seed(seed, "style", i)), {}};
  p.rendered = plotgen::render(p.spec);
  return p;
}

std::vector<qgen::QuestionInstance> questions_for(const Plot& p, uint64_t seed, int i) {
  return qgen::instantiate(p.spec, qgen::default_templates(), derive_seed(seed, "questions", i));
}

void round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  std::set<plotgen::PlotType> types;
  int perfect = 0, n_questions = 0, n_correct = 0;
  double worst_f1 = 1;
  for (int i = 0; i < kRoundTripPlots; ++i) {
    const auto p = make_plot(kSeed, i);
    types.insert(p.spec.plot_type);
    const hybrid::PlotView view(detsim::perturb(p.rendered.annotation, detsim::zero_noise()));
    const double f1 = sie::table_f1(view.table(), p.rendered.annotation.gold_table,
                                    kRoundTripTupleTol).f1;
    worst_f1 = std::min(worst_f1, f1);
    perfect += f1 == 1.0;
    for (const auto& q : questions_for(p, kSeed, i)) {
      ++n_questions;
      n_correct += harness::score_answer(hybrid::answer(q.text, view), q.gold);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = perfect == kRoundTripPlots && n_correct == n_questions && types.size() == 4 &&
                  secs < kRoundTripMaxSeconds;
  report("round-trip exactness", ok,
         fmt("plots=%d types=%zu F1=1 on %d (min %.4f) QA %d/%d time %.1fs", kRoundTripPlots,
             types.size(), perfect, worst_f1, n_correct, n_questions, secs));
}

void executor_oracle() {
  const auto r = oracle::run(kOracleTables, kSeed);
  report("executor-oracle equivalence", r.mismatches == 0 && r.checks > 0,
         fmt("tables=%d checks=%d mismatches=%d %s", kOracleTables, r.checks, r.mismatches,
             r.first_failure.c_str()));
}

void parser_round_trip() {
  std::map<int, int> per_template;
  int total = 0, ok = 0;
  std::string first_bad;
  for (int i = 0; static_cast<int>(per_template.size()) < qgen::kNumTemplates ||
                  std::any_of(per_template.begin(), per_template.end(),
                              [](auto& kv) { return kv.second < kParserMinPerTemplate; });
       ++i) {
    if (i > 20000) break;
    const auto p = make_plot(kSeed + 1, i);
    const auto ctx = tableqa::ParseContext::of(p.rendered.annotation.gold_table);
    for (const auto& q : questions_for(p, kSeed + 1, i)) {
      ++total;
      per_template[q.template_id]++;
      try {
        const auto parsed = tableqa::parse(q.text, &ctx);
        if (parsed.template_id == q.template_id && parsed.bindings == q.bindings) {
          ++ok;
          continue;
        }
      } catch (const UnparseableQuestion&) {
      }
      if (first_bad.empty()) first_bad = q.text;
    }
  }
  int min_count = total;
  for (const auto& [id, n] : per_template) min_count = std::min(min_count, n);
  const bool pass = ok == total && static_cast<int>(per_template.size()) == qgen::kNumTemplates &&
                    min_count >= kParserMinPerTemplate;
  report("parser round-trip", pass,
         fmt("templates=%zu min/template=%d reparsed %d/%d%s%s", per_template.size(), min_count,
             ok, total, first_bad.empty() ? "" : " first failure: ", first_bad.c_str()));
}

void metric_fixtures() {
  using harness::score_answer;
  const bool a = score_answer(Answer::of_number(98), Answer::of_number(100));
  const bool b = !score_answer(Answer::of_number(680), Answer::of_number(760));
  const bool c = !score_answer(Answer::of_text("Indoo"), Answer::of_text("Indoor"));
  const bool d = score_answer(Answer::of_number(1.05 * 340), Answer::of_number(340));
  report("metric fixtures", a && b && c && d,
         fmt("(100,98)=%s (760,680)=%s (Indoor,Indoo)=%s boundary 1.05x=%s", a ? "true" : "WRONG",
             b ? "false" : "WRONG", c ? "false" : "WRONG", d ? "true" : "WRONG"));
}

void ap_monotonicity() {
  int violations = 0;
  double min_gap = 1;
  for (int i = 0; i < kApSets; ++i) {
    const auto p = make_plot(kSeed + 2, i);
    auto noise = detsim::paper_like_noise();
    noise.seed = derive_seed(kSeed + 2, "noise", i);
    const auto d = detsim::perturb(p.rendered.annotation, noise);
    const double m50 = detsim::average_precision(d, p.rendered.annotation, 0.5).map;
    const double m75 = detsim::average_precision(d, p.rendered.annotation, 0.75).map;
    const double m90 = detsim::average_precision(d, p.rendered.annotation, 0.9).map;
    if (!(m90 <= m75 && m75 <= m50)) ++violations;
    min_gap = std::min(min_gap, m50 - m90);
  }
  bool identity = true;
  for (int i = 0; i < 20; ++i) {
    const auto p = make_plot(kSeed + 3, i);
    const auto d = detsim::from_annotation(p.rendered.annotation);
    for (double t : {0.5, 0.75, 0.9})
      identity = identity && detsim::average_precision(d, p.rendered.annotation, t).map == 1.0;
  }
  report("AP monotonicity", violations == 0 && identity,
         fmt("noisy sets=%d violations=%d identity mAP=1 at 0.5/0.75/0.9: %s", kApSets,
             violations, identity ? "yes" : "NO"));
}

void calibrated_noise() {
  detsim::ApAccumulator a50(0.5), a75(0.75), a90(0.9);
  double f1 = 0;
  for (int i = 0; i < kCalibrationPlots; ++i) {
    const auto p = make_plot(kSeed + 4, i);
    auto noise = detsim::paper_like_noise();
    noise.seed = derive_seed(kSeed + 4, "noise", i);
    const auto d = detsim::perturb(p.rendered.annotation, noise);
    a50.add(d, p.rendered.annotation);
    a75.add(d, p.rendered.annotation);
    a90.add(d, p.rendered.annotation);
    f1 += sie::table_f1(sie::extract(d).table, p.rendered.annotation.gold_table).f1;
  }
  f1 /= kCalibrationPlots;
  const double m50 = a50.result().map, m90 = a90.result().map;
  const bool ok = m50 >= kMap50Lo && m50 <= kMap50Hi && m90 >= kMap90Lo && m90 <= kMap90Hi &&
                  f1 >= kF1Lo && f1 <= kF1Hi;
  report("calibrated-noise bands", ok,
         fmt("plots=%d mAP@0.5=%.4f [%.2f,%.2f] mAP@0.75=%.4f mAP@0.9=%.4f [%.2f,%.2f] "
             "table F1=%.4f [%.2f,%.2f]",
             kCalibrationPlots, m50, kMap50Lo, kMap50Hi, a75.result().map, m90, kMap90Lo,
             kMap90Hi, f1, kF1Lo, kF1Hi));
}

void ablation() {
  using hybrid::System;
  const System systems[] = {System::hybrid, System::pipeline_only, System::classification_only};
  harness::EvalReport reports[3];
  for (int i = 0; i < kAblationPlots; ++i) {
    const auto p = make_plot(kSeed + 5, i);
    auto noise = detsim::paper_like_noise();
    noise.seed = derive_seed(kSeed + 5, "noise", i);
    const hybrid::PlotView view(detsim::perturb(p.rendered.annotation, noise));
    const auto qs = questions_for(p, kSeed + 5, i);
    for (int s = 0; s < 3; ++s)
      harness::merge(reports[s], harness::evaluate(qs, [&](size_t k) {
                       return hybrid::answer(qs[k].text, view, systems[s]);
                     }));
  }
  const auto& h = reports[0];
  const double structural_yn = h.grid[0][0].accuracy().value_or(0);
  const double dr_open = h.grid[1][2].accuracy().value_or(1);
  const double rs_open = h.grid[2][2].accuracy().value_or(1);
  const bool ok = h.overall_accuracy > reports[1].overall_accuracy &&
                  h.overall_accuracy > reports[2].overall_accuracy &&
                  structural_yn > dr_open && structural_yn > rs_open;
  report("ablation ordering", ok,
         fmt("hybrid=%.2f%% pipeline=%.2f%% classification=%.2f%% | structural yes/no=%.2f%% "
             "> open-vocab retrieval=%.2f%%, reasoning=%.2f%%",
             100 * h.overall_accuracy, 100 * reports[1].overall_accuracy,
             100 * reports[2].overall_accuracy, 100 * structural_yn, 100 * dr_open,
             100 * rs_open));
}

void ocr() {
  detsim::NoiseModel trunc, sub, digit;
  trunc.ocr_truncate_prob = 1;
  sub.ocr_char_sub_prob = 1;
  digit.ocr_sign_digit_prob = 1;
  const auto f1 = detsim::corrupt_text("Indoor", trunc, 1);
  const auto f2 = detsim::corrupt_text("Operator", sub, 1);
  const auto f3 = detsim::corrupt_text("2008", digit, 11);
  const bool fixtures = f1 == "Indoo" && f2 == "Dperator" && f3 == "200B";

  // Gold strings are real plot texts; each is truncated with probability
  // 0.03, which changes every string longer than one character.
  std::vector<detsim::ElementClass> classes;
  std::vector<std::string> gold, pred;
  detsim::NoiseModel batch;
  batch.ocr_truncate_prob = 1 - kOcrClean;
  for (int i = 0; static_cast<int>(gold.size()) < kOcrBatch; ++i) {
    const auto p = make_plot(kSeed + 6, i);
    for (const auto& e : p.rendered.annotation.elements) {
      if (!plotgen::is_textual(e.cls) || !e.text || e.text->size() < 2) continue;
      if (static_cast<int>(gold.size()) == kOcrBatch) break;
      classes.push_back(e.cls);
      gold.push_back(*e.text);
      pred.push_back(
          detsim::corrupt_text(*e.text, batch, derive_seed(kSeed + 6, "ocr", gold.size())));
    }
  }
  const double acc = detsim::ocr_accuracy(classes, pred, gold).total;
  const bool ok = fixtures && std::fabs(acc - kOcrClean) <= kOcrTol;
  report("OCR fixtures", ok,
         fmt("\"%s\" \"%s\" \"%s\" | batch=%d accuracy=%.4f (%.2f +/- %.3f)", f1.c_str(),
             f2.c_str(), f3.c_str(), kOcrBatch, acc, kOcrClean, kOcrTol));
}

void distribution() {
  double counts[3][3] = {};
  int n = 0;
  for (int i = 0; n < kDistributionQuestions; ++i) {
    const auto p = make_plot(kSeed + 7, i);
    for (const auto& q : questions_for(p, kSeed + 7, i)) {
      counts[static_cast<int>(q.category)][static_cast<int>(q.answer_type)]++;
      ++n;
    }
  }
  double worst = 0;
  std::string cells;
  for (int c = 0; c < 3; ++c) {
    const double row = counts[c][0] + counts[c][1] + counts[c][2];
    for (int a = 0; a < 3; ++a) {
      const double pct = row > 0 ? 100 * counts[c][a] / row : 0;
      worst = std::max(worst, std::fabs(pct - kPublishedShares[c][a]));
      cells += fmt(" %.1f", pct);
    }
    cells += c < 2 ? " |" : "";
  }
  report("distribution check", worst <= kDistributionTolPp,
         fmt("questions=%d max deviation %.2f pp (limit %.0f) shares:%s", n, worst,
             kDistributionTolPp, cells.c_str()));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> checks = {
      {"round-trip exactness", round_trip},
      {"executor-oracle equivalence", executor_oracle},
      {"parser round-trip", parser_round_trip},
      {"metric fixtures", metric_fixtures},
      {"AP monotonicity", ap_monotonicity},
      {"calibrated-noise bands", calibrated_noise},
      {"ablation ordering", ablation},
      {"OCR fixtures", ocr},
      {"distribution check", distribution},
  };
  for (const auto& [name, run] : checks) {
    try {
      run();
    } catch (const std::exception& e) {
      report(name, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures == 0 ? 0 : 1;
}
