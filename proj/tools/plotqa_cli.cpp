// plotqa command-line tool. Talks to the library only through plotqa.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plotqa/plotqa.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Failure {
  int code;
};

// Owns a string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { plotqa_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(plotqa_status s) {
  if (s == PLOTQA_OK) return;
  std::cerr << "plotqa: " << plotqa_status_name(s) << ": " << plotqa_last_error() << "\n";
  throw Failure{s == PLOTQA_E_INVALID_ARGUMENT ? kExitUsage : kExitData};
}

using Config = std::unique_ptr<plotqa_config, decltype(&plotqa_config_free)>;

Config new_config() {
  plotqa_config* c = nullptr;
  check(plotqa_config_new(&c));
  return Config(c, plotqa_config_free);
}

void set(const Config& c, const char* key, const std::string& value) {
  if (!value.empty()) check(plotqa_config_set(c.get(), key, value.c_str()));
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "plotqa: cannot write " << path << "\n";
    throw Failure{kExitData};
  }
}

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "plotqa: cannot read " << path << "\n";
    throw Failure{kExitData};
  }
  return std::string(std::istreambuf_iterator<char>(f), {});
}

void print_report(const std::string& report_json) {
  CString text;
  check(plotqa_report_text(report_json.c_str(), &text.p));
  std::cout << text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic plot question answering: generate datasets, simulate perception, "
               "answer and score questions."};
  app.set_version_flag("--version", std::string(plotqa_version()));
  app.require_subcommand(1);

  struct {
    std::string corpus, split = "0.7,0.15,0.15", out, weights;
    std::string n_plots = "100", seed = "0", threads = "0";
  } gen;
  auto* g = app.add_subcommand("generate", "Generate plots, annotations, tables and questions");
  g->add_option("--corpus", gen.corpus, "Indicator corpus file (default: built-in)");
  g->add_option("--n-plots", gen.n_plots, "Number of plots")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--split", gen.split, "Train,valid,test ratios")->capture_default_str();
  g->add_option("--template-weights", gen.weights, "JSON file of per-template weights");
  g->add_option("--threads", gen.threads, "Worker threads, 0 for all cores");
  g->add_option("--out", gen.out, "Output directory")->required();

  struct {
    std::string dataset, noise = "paper-like", system = "hybrid", split = "test", out;
    std::string threads = "0";
  } run;
  auto* r = app.add_subcommand("run", "Answer a dataset's questions under simulated perception");
  r->add_option("--dataset", run.dataset, "Dataset directory")->required();
  r->add_option("--noise", run.noise, "Noise preset (zero, paper-like) or JSON file")
      ->capture_default_str();
  r->add_option("--system", run.system, "hybrid, pipeline or classification")
      ->capture_default_str();
  r->add_option("--split", run.split, "train, valid, test or all")->capture_default_str();
  r->add_option("--threads", run.threads, "Worker threads, 0 for all cores");
  r->add_option("--out", run.out, "Directory for predictions and report");

  struct {
    std::string file, noise, out;
  } ext;
  auto* x = app.add_subcommand("extract", "Build a table CSV from an annotation or detection file");
  x->add_option("file", ext.file, "Annotation or detection JSON")->required();
  x->add_option("--noise", ext.noise, "Perturb an annotation before extraction");
  x->add_option("--out", ext.out, "CSV path (default: stdout)");

  struct {
    std::string dataset, predictions, split = "test", out;
  } ev;
  auto* e = app.add_subcommand("evaluate", "Score a predictions file against a dataset");
  e->add_option("--dataset", ev.dataset, "Dataset directory")->required();
  e->add_option("--predictions", ev.predictions, "predictions.jsonl")->required();
  e->add_option("--split", ev.split, "train, valid, test or all")->capture_default_str();
  e->add_option("--out", ev.out, "Write report JSON here");

  std::string report_path;
  auto* rep = app.add_subcommand("report", "Print a report JSON as a text table");
  rep->add_option("report", report_path, "report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) {
      auto c = new_config();
      set(c, "out", gen.out);
      set(c, "n_plots", gen.n_plots);
      set(c, "seed", gen.seed);
      set(c, "corpus", gen.corpus);
      set(c, "split", gen.split);
      set(c, "template_weights", gen.weights);
      set(c, "threads", gen.threads);
      CString summary;
      check(plotqa_generate(c.get(), &summary.p));
      std::cout << summary.str() << "\n";
    } else if (*r) {
      auto c = new_config();
      set(c, "dataset", run.dataset);
      set(c, "noise", run.noise);
      set(c, "system", run.system);
      set(c, "split", run.split);
      set(c, "out", run.out);
      set(c, "threads", run.threads);
      CString report;
      check(plotqa_run(c.get(), &report.p));
      print_report(report.str());
    } else if (*x) {
      CString csv, warnings;
      check(plotqa_extract_file(ext.file.c_str(), ext.noise.c_str(), &csv.p, &warnings.p));
      const std::string w = warnings.str();
      if (w != "[]") std::cerr << "plotqa: warnings: " << w << "\n";
      write_or_print(ext.out, csv.str());
    } else if (*e) {
      auto c = new_config();
      set(c, "dataset", ev.dataset);
      set(c, "predictions", ev.predictions);
      set(c, "split", ev.split);
      CString report;
      check(plotqa_evaluate(c.get(), &report.p));
      if (!ev.out.empty()) write_or_print(ev.out, report.str() + "\n");
      print_report(report.str());
    } else if (*rep) {
      print_report(read_all(report_path));
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
