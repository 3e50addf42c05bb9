// Exercises the shared library through its C header only.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "plotqa/plotqa.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { plotqa_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

struct Cfg {
  plotqa_config* c = nullptr;
  Cfg() { REQUIRE(plotqa_config_new(&c) == PLOTQA_OK); }
  ~Cfg() { plotqa_config_free(c); }
  void set(const char* k, const std::string& v) {
    INFO(k << "=" << v << ": " << plotqa_last_error());
    REQUIRE(plotqa_config_set(c, k, v.c_str()) == PLOTQA_OK);
  }
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("plotqa_capi_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

// A small dataset shared by several cases.
const fs::path& dataset() {
  static const fs::path dir = [] {
    auto d = scratch("dataset");
    Cfg cfg;
    cfg.set("out", d.string());
    cfg.set("n_plots", "40");
    cfg.set("seed", "5");
    REQUIRE(plotqa_generate(cfg.c, nullptr) == PLOTQA_OK);
    return d;
  }();
  return dir;
}

double run_accuracy(const std::string& noise, const std::string& system = "hybrid",
                    const std::string& out = "") {
  Cfg cfg;
  cfg.set("dataset", dataset().string());
  cfg.set("noise", noise);
  cfg.set("system", system);
  if (!out.empty()) cfg.set("out", out);
  Str report;
  const auto st = plotqa_run(cfg.c, &report.p);
  INFO(plotqa_last_error());
  REQUIRE(st == PLOTQA_OK);
  return json::parse(report.s()).at("overall_accuracy").get<double>();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(plotqa_version()) == "0.1.0");
  CHECK(std::string(plotqa_status_name(PLOTQA_OK)) == "ok");
  CHECK(std::string(plotqa_status_name(PLOTQA_E_SCHEMA)) == "schema error");
}

TEST_CASE("config rejects bad keys and values") {
  Cfg cfg;
  CHECK(plotqa_config_set(cfg.c, "colour", "red") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(std::string(plotqa_last_error()).find("colour") != std::string::npos);
  CHECK(plotqa_config_set(cfg.c, "n_plots", "ten") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(plotqa_config_set(cfg.c, "seed", "-1") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(plotqa_config_set(cfg.c, "split", "0.5,0.6,0.1") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(plotqa_config_set(cfg.c, "system", "oracle") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(plotqa_config_set(nullptr, "seed", "1") == PLOTQA_E_INVALID_ARGUMENT);
  CHECK(plotqa_config_set(cfg.c, "seed", "18446744073709551615") == PLOTQA_OK);
  CHECK(std::string(plotqa_last_error()).empty());
}

TEST_CASE("generate writes the dataset layout") {
  const auto& d = dataset();
  for (const char* f : {"plots/0000.svg", "plots/0039.svg", "annotations/0039.json",
                        "tables/0039.csv", "questions.jsonl", "manifest.json"})
    CHECK_MESSAGE(fs::exists(d / f), f);
  CHECK_FALSE(fs::exists(d / "plots/0040.svg"));
  const auto manifest = json::parse(slurp(d / "manifest.json"));
  CHECK(manifest.at("seed") == 5);
  CHECK(manifest.at("n_plots") == 40);
  CHECK(manifest.at("split").at("train") == 28);
}

TEST_CASE("generate is reproducible and validates n_plots") {
  std::string hashes[2];
  for (int k = 0; k < 2; ++k) {
    Cfg cfg;
    cfg.set("out", scratch("repro" + std::to_string(k)).string());
    cfg.set("n_plots", "10");
    cfg.set("seed", "99");
    cfg.set("threads", k == 0 ? "1" : "4");
    Str summary;
    REQUIRE(plotqa_generate(cfg.c, &summary.p) == PLOTQA_OK);
    const auto j = json::parse(summary.s());
    CHECK(j.at("n_plots") == 10);
    hashes[k] = j.at("manifest_fnv1a64");
  }
  CHECK(hashes[0] == hashes[1]);

  Cfg zero;
  zero.set("out", scratch("zero").string());
  zero.set("n_plots", "0");
  CHECK(plotqa_generate(zero.c, nullptr) == PLOTQA_E_INVALID_ARGUMENT);

  Cfg bad_corpus;
  const auto corpus = scratch("corpus.txt");
  std::ofstream(corpus) << "Rainfall|millimetres|planets|0|10|float\n";
  bad_corpus.set("out", scratch("badcorpus").string());
  bad_corpus.set("corpus", corpus.string());
  CHECK(plotqa_generate(bad_corpus.c, nullptr) == PLOTQA_E_SCHEMA);
  CHECK(std::string(plotqa_last_error()).find("line 1") != std::string::npos);
}

TEST_CASE("run: zero noise answers everything, full drop answers nothing") {
  const auto out = scratch("run0");
  CHECK(run_accuracy("zero", "hybrid", out.string()) == 1.0);
  CHECK(fs::exists(out / "predictions.jsonl"));
  CHECK(fs::exists(out / "report.txt"));

  const auto noise = scratch("drop.json");
  std::ofstream(noise) << R"({"drop_prob": 1.0})";
  CHECK(run_accuracy(noise.string()) < 0.05);

  Cfg missing;
  missing.set("dataset", scratch("missing").string());
  CHECK(plotqa_run(missing.c, nullptr) == PLOTQA_E_IO);
}

TEST_CASE("evaluate rescoring matches run") {
  const auto out = scratch("run1");
  const double acc = run_accuracy("paper-like", "hybrid", out.string());
  CHECK(acc > 0.5);
  CHECK(acc < 1.0);
  Cfg cfg;
  cfg.set("dataset", dataset().string());
  cfg.set("predictions", (out / "predictions.jsonl").string());
  Str report;
  REQUIRE(plotqa_evaluate(cfg.c, &report.p) == PLOTQA_OK);
  CHECK(json::parse(report.s()).at("overall_accuracy").get<double>() == acc);

  Str text;
  REQUIRE(plotqa_report_text(report.s().c_str(), &text.p) == PLOTQA_OK);
  CHECK(text.s().find("accuracy") != std::string::npos);
  CHECK(plotqa_report_text("{not json", &text.p) == PLOTQA_E_SCHEMA);
}

TEST_CASE("extract_file reproduces the gold table") {
  const auto& d = dataset();
  Str csv, warnings;
  REQUIRE(plotqa_extract_file((d / "annotations/0007.json").string().c_str(), nullptr, &csv.p,
                              &warnings.p) == PLOTQA_OK);
  CHECK(csv.s() == slurp(d / "tables/0007.csv"));
  CHECK(warnings.s() == "[]");

  const auto empty = scratch("empty.json");
  std::ofstream(empty) << R"({"plot_type": "line", "detections": []})";
  Str csv2, warnings2;
  REQUIRE(plotqa_extract_file(empty.string().c_str(), "", &csv2.p, &warnings2.p) == PLOTQA_OK);
  CHECK(csv2.s().empty());
  CHECK(warnings2.s().find("no detections") != std::string::npos);

  Str csv3;
  CHECK(plotqa_extract_file(scratch("nothing.json").string().c_str(), nullptr, &csv3.p,
                            nullptr) == PLOTQA_E_IO);
}

TEST_CASE("plot and detection handles") {
  plotqa_plot* plot = nullptr;
  REQUIRE(plotqa_plot_generate(11, nullptr, &plot) == PLOTQA_OK);
  Str svg, ann, csv, qs;
  REQUIRE(plotqa_plot_svg(plot, &svg.p) == PLOTQA_OK);
  CHECK(svg.s().find("<svg") != std::string::npos);
  REQUIRE(plotqa_plot_annotation_json(plot, &ann.p) == PLOTQA_OK);
  REQUIRE(plotqa_plot_table_csv(plot, &csv.p) == PLOTQA_OK);
  REQUIRE(plotqa_plot_questions_jsonl(plot, 3, &qs.p) == PLOTQA_OK);

  // Gold detections answer every generated question correctly.
  plotqa_detections* gold = nullptr;
  REQUIRE(plotqa_detections_from_json(ann.s().c_str(), &gold) == PLOTQA_OK);
  Str gold_csv;
  REQUIRE(plotqa_detections_table_csv(gold, &gold_csv.p) == PLOTQA_OK);
  CHECK(gold_csv.s() == csv.s());
  int n = 0;
  size_t start = 0;
  const std::string lines = qs.s();
  for (size_t end; (end = lines.find('\n', start)) != std::string::npos; start = end + 1) {
    const auto q = json::parse(lines.substr(start, end - start));
    plotqa_answer *pred = nullptr, *want = nullptr;
    REQUIRE(plotqa_answer_question(gold, q.at("question").get<std::string>().c_str(), "hybrid",
                                   &pred) == PLOTQA_OK);
    REQUIRE(plotqa_answer_from_json(q.at("answer").dump().c_str(), &want) == PLOTQA_OK);
    int ok = 0;
    REQUIRE(plotqa_score_answer(pred, want, &ok) == PLOTQA_OK);
    CHECK_MESSAGE(ok == 1, q.at("question"));
    plotqa_answer_free(pred);
    plotqa_answer_free(want);
    ++n;
  }
  CHECK(n > 10);

  plotqa_detections* noisy = nullptr;
  REQUIRE(plotqa_detections_simulate(plot, "paper-like", 8, &noisy) == PLOTQA_OK);
  double m50 = 0, m90 = 0;
  REQUIRE(plotqa_detections_map(noisy, plot, 0.5, &m50) == PLOTQA_OK);
  REQUIRE(plotqa_detections_map(noisy, plot, 0.9, &m90) == PLOTQA_OK);
  CHECK(m90 <= m50);
  CHECK(plotqa_detections_map(noisy, plot, 0.0, &m50) == PLOTQA_E_INVALID_ARGUMENT);
  Str noisy_json;
  REQUIRE(plotqa_detections_to_json(noisy, &noisy_json.p) == PLOTQA_OK);
  CHECK(noisy_json.s().find("\"score\"") != std::string::npos);

  plotqa_answer* a = nullptr;
  REQUIRE(plotqa_answer_question(noisy, "What is the meaning of life?", nullptr, &a) ==
          PLOTQA_OK);
  CHECK(std::string(plotqa_answer_kind(a)) == "unavailable");
  plotqa_answer_free(a);

  plotqa_detections_free(noisy);
  plotqa_detections_free(gold);
  plotqa_plot_free(plot);
}

TEST_CASE("answer scoring through the C API") {
  auto make = [](const char* j) {
    plotqa_answer* a = nullptr;
    REQUIRE(plotqa_answer_from_json(j, &a) == PLOTQA_OK);
    return a;
  };
  auto verdict = [&](const char* pred, const char* gold) {
    auto *p = make(pred), *g = make(gold);
    int ok = -1;
    REQUIRE(plotqa_score_answer(p, g, &ok) == PLOTQA_OK);
    plotqa_answer_free(p);
    plotqa_answer_free(g);
    return ok;
  };
  CHECK(verdict(R"({"kind":"number","value":98})", R"({"kind":"number","value":100})") == 1);
  CHECK(verdict(R"({"kind":"number","value":680})", R"({"kind":"number","value":760})") == 0);
  CHECK(verdict(R"({"kind":"text","value":"Indoo"})", R"({"kind":"text","value":"Indoor"})") ==
        0);

  auto* t = make(R"({"kind":"text","value":"Cuba"})");
  double v = 0;
  CHECK(plotqa_answer_number(t, &v) == PLOTQA_E_INVALID_ARGUMENT);
  Str shown, back;
  REQUIRE(plotqa_answer_display(t, &shown.p) == PLOTQA_OK);
  CHECK(shown.s() == "Cuba");
  REQUIRE(plotqa_answer_to_json(t, &back.p) == PLOTQA_OK);
  CHECK(json::parse(back.s()) == json::parse(R"({"kind":"text","value":"Cuba"})"));
  plotqa_answer_free(t);

  plotqa_answer* bad = nullptr;
  CHECK(plotqa_answer_from_json(R"({"kind":"vector"})", &bad) == PLOTQA_E_SCHEMA);
  CHECK(bad == nullptr);
}

TEST_CASE("corrupt_text") {
  Str same;
  REQUIRE(plotqa_corrupt_text("Indoor", "zero", 1, &same.p) == PLOTQA_OK);
  CHECK(same.s() == "Indoor");
  Str other;
  CHECK(plotqa_corrupt_text("Indoor", "no-such-preset", 1, &other.p) != PLOTQA_OK);
}

TEST_CASE("last error is per thread") {
  Cfg cfg;
  REQUIRE(plotqa_config_set(cfg.c, "bogus", "1") == PLOTQA_E_INVALID_ARGUMENT);
  std::string seen_in_thread = "unset";
  std::thread([&] { seen_in_thread = plotqa_last_error(); }).join();
  CHECK(seen_in_thread.empty());
  CHECK(std::string(plotqa_last_error()).find("bogus") != std::string::npos);
}
