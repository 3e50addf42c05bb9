#include "doctest.h"
#include "plotqa/corpus.hpp"
#include "plotqa/detsim.hpp"

using namespace plotqa;
using namespace plotqa::detsim;
using plotgen::ElementClass;

namespace {

plotgen::PlotAnnotation sample_annotation(uint64_t seed) {
  const auto data = corpus::sample_plot_data(corpus::default_corpus(), seed);
  return plotgen::render(plotgen::make_plot_spec(data, seed)).annotation;
}

}  // namespace

TEST_CASE("iou") {
  CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(iou({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3));
  CHECK(iou({5, 0, 10, 10}, {0, 0, 10, 10}) == doctest::Approx(1.0 / 3));
  CHECK(iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);  // shared edge only
}

TEST_CASE("zero noise is the identity") {
  for (uint64_t s = 0; s < 30; ++s) {
    const auto a = sample_annotation(s);
    const auto d = perturb(a, zero_noise());
    REQUIRE(d.detections.size() == a.elements.size());
    for (size_t i = 0; i < a.elements.size(); ++i) {
      CHECK(d.detections[i].cls == a.elements[i].cls);
      CHECK(d.detections[i].bbox == a.elements[i].bbox);
      CHECK(d.detections[i].text == a.elements[i].text);
      CHECK(d.detections[i].color == a.elements[i].color);
      CHECK(d.detections[i].score == 1.0);
    }
    const auto ap = average_precision(d, a, 0.9);
    for (const auto& [cls, v] : ap.per_class) CHECK(v == doctest::Approx(1.0));
    CHECK(ap.map == doctest::Approx(1.0));
  }
}

TEST_CASE("drop everything") {
  NoiseModel n;
  n.drop_prob = 1;
  CHECK(perturb(sample_annotation(3), n).detections.empty());
}

TEST_CASE("noise validation") {
  NoiseModel n;
  n.drop_prob = 1.5;
  CHECK_THROWS_AS(validate(n), SchemaError);
  n = {};
  n.box_jitter_sigma = -1;
  CHECK_THROWS_AS(validate(n), SchemaError);
  CHECK_THROWS(noise_preset("loud"));
  CHECK(noise_preset("zero").is_zero());
  CHECK_FALSE(noise_preset("paper-like").is_zero());
}

TEST_CASE("perturb is deterministic and keeps scores in (0,1]") {
  const auto a = sample_annotation(11);
  auto n = paper_like_noise();
  n.misclass_prob = 0.2;
  n.drop_prob = 0.2;
  const auto d1 = perturb(a, n);
  const auto d2 = perturb(a, n);
  REQUIRE(d1.detections.size() == d2.detections.size());
  for (size_t i = 0; i < d1.detections.size(); ++i) {
    const auto& x = d1.detections[i];
    CHECK(x.bbox == d2.detections[i].bbox);
    CHECK(x.text == d2.detections[i].text);
    CHECK(x.score > 0);
    CHECK(x.score <= 1);
    CHECK(x.bbox.w > 0);
    CHECK(x.bbox.h > 0);
    // Misclassification stays within the textual or mark family.
    CHECK(plotgen::is_textual(x.cls) == plotgen::is_textual(a.elements[x.source].cls));
  }
  CHECK(d1.detections.size() < a.elements.size());
}

TEST_CASE("half the bars detected gives bar AP 0.5") {
  plotgen::PlotAnnotation gold;
  gold.elements.push_back({ElementClass::bar, {10, 10, 20, 50}, {}, 1, 0, 0});
  gold.elements.push_back({ElementClass::bar, {40, 10, 20, 50}, {}, 1, 0, 1});
  DetectionSet pred;
  pred.detections.push_back({ElementClass::bar, {10, 10, 20, 50}, 1.0, {}, 1, 0});
  for (double t : {0.5, 0.75, 0.9}) {
    const auto ap = average_precision(pred, gold, t);
    CHECK(ap.per_class.at(ElementClass::bar) == doctest::Approx(0.5));
    CHECK(ap.per_class.size() == 1);
  }
  // The 11-point variant also reads 6/11 at recall 0..0.5.
  CHECK(average_precision(pred, gold, 0.5, ApInterpolation::eleven_point).map ==
        doctest::Approx(6.0 / 11));
  CHECK_THROWS(average_precision(pred, gold, 1.0));
}

TEST_CASE("false positives ranked above true positives lower AP") {
  plotgen::PlotAnnotation gold;
  gold.elements.push_back({ElementClass::bar, {0, 0, 10, 10}, {}, 1, 0, 0});
  DetectionSet pred;
  pred.detections.push_back({ElementClass::bar, {50, 50, 10, 10}, 0.9, {}, 1, -1});
  pred.detections.push_back({ElementClass::bar, {0, 0, 10, 10}, 0.8, {}, 1, 0});
  CHECK(average_precision(pred, gold, 0.5).map == doctest::Approx(0.5));
  pred.detections[0].score = 0.7;
  CHECK(average_precision(pred, gold, 0.5).map == doctest::Approx(1.0));
}

TEST_CASE("mAP is antitone in the IOU threshold") {
  auto n = paper_like_noise();
  n.box_jitter_sigma = 2.0;
  for (uint64_t s = 0; s < 40; ++s) {
    const auto a = sample_annotation(s);
    n.seed = s;
    const auto d = perturb(a, n);
    const double m5 = average_precision(d, a, 0.5).map;
    const double m75 = average_precision(d, a, 0.75).map;
    const double m9 = average_precision(d, a, 0.9).map;
    CHECK(m9 <= m75 + 1e-12);
    CHECK(m75 <= m5 + 1e-12);
  }
}

TEST_CASE("pooled AP matches single-plot AP for one plot") {
  const auto a = sample_annotation(5);
  auto n = paper_like_noise();
  const auto d = perturb(a, n);
  ApAccumulator acc(0.75);
  acc.add(d, a);
  CHECK(acc.result().map == doctest::Approx(average_precision(d, a, 0.75).map));
}

TEST_CASE("OCR corruption fixtures") {
  NoiseModel trunc;
  trunc.ocr_truncate_prob = 1;
  CHECK(corrupt_text("Indoor", trunc, 1) == "Indoo");

  NoiseModel sub;
  sub.ocr_char_sub_prob = 1;
  CHECK(corrupt_text("Operator", sub, 1) == "Dperator");

  NoiseModel digit;
  digit.ocr_sign_digit_prob = 1;
  CHECK(corrupt_text("2008", digit, 11) == "200B");

  CHECK(corrupt_text("Operator", zero_noise(), 9) == "Operator");
  for (uint64_t s = 0; s < 200; ++s) {
    NoiseModel m;
    m.ocr_char_sub_prob = 0.3;
    const std::string in = "GDP OF SOME REGION 2014";
    CHECK(corrupt_text(in, m, s).size() == in.size());
    m.ocr_char_sub_prob = 0;
    m.ocr_truncate_prob = 0.5;
    CHECK(corrupt_text(in, m, s).size() <= in.size());
  }
}

TEST_CASE("ocr accuracy") {
  std::vector<ElementClass> cls(10, ElementClass::xtick_label);
  std::vector<std::string> gold(10, "Indoor"), pred = gold;
  CHECK(ocr_accuracy(cls, pred, gold).total == 1.0);
  pred[4] = "Indoo";
  const auto r = ocr_accuracy(cls, pred, gold);
  CHECK(r.total == doctest::Approx(0.9));
  CHECK(r.per_class.at(ElementClass::xtick_label) == doctest::Approx(0.9));
  CHECK_THROWS(ocr_accuracy(cls, std::vector<std::string>(3), gold));

  std::vector<ElementClass> c1000(1000, ElementClass::legend_label);
  std::vector<std::string> g1000(1000, "x"), p1000 = g1000;
  for (int i = 0; i < 30; ++i) p1000[i * 33] = "y";
  CHECK(ocr_accuracy(c1000, p1000, g1000).total == doctest::Approx(0.97).epsilon(1e-9));
}

TEST_CASE("ocr accuracy on a perturbed plot") {
  const auto a = sample_annotation(8);
  CHECK(ocr_accuracy(perturb(a, zero_noise()), a).total == 1.0);
  NoiseModel n;
  n.ocr_truncate_prob = 1;
  const auto r = ocr_accuracy(perturb(a, n), a);
  CHECK(r.total < 0.2);
  CHECK(r.n > 5);
}
