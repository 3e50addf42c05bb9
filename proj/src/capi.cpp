#include "plotqa/plotqa.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "plotqa/corpus.hpp"
#include "plotqa/runner.hpp"
#include "plotqa/serialize.hpp"
#include "plotqa/version.hpp"

using namespace plotqa;

struct plotqa_config {
  runner::GenerateConfig gen;
  runner::RunConfig run;
  std::string predictions;
  std::string eval_split = "test";
};

struct plotqa_plot {
  plotgen::PlotSpec spec;
  plotgen::Rendered rendered;
};

struct plotqa_detections {
  explicit plotqa_detections(detsim::DetectionSet d) : view(std::move(d)) {}
  hybrid::PlotView view;
};

struct plotqa_answer {
  Answer a;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

plotqa_status fail(plotqa_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

struct InvalidArgument : Error {
  using Error::Error;
};

void require(const void* p, const char* name) {
  if (!p) throw InvalidArgument(std::string(name) + " is NULL");
}

// Runs f and maps exceptions to status codes.
template <class F>
plotqa_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return PLOTQA_OK;
  } catch (const InvalidArgument& e) {
    return fail(PLOTQA_E_INVALID_ARGUMENT, e.what());
  } catch (const SchemaError& e) {
    return fail(PLOTQA_E_SCHEMA, e.what());
  } catch (const IoError& e) {
    return fail(PLOTQA_E_IO, e.what());
  } catch (const LayoutError& e) {
    return fail(PLOTQA_E_LAYOUT, e.what());
  } catch (const UnparseableQuestion& e) {
    return fail(PLOTQA_E_UNPARSEABLE, e.what());
  } catch (const ExtractionError& e) {
    return fail(PLOTQA_E_EXTRACTION, e.what());
  } catch (const Error& e) {
    // Remaining library errors are configuration problems.
    return fail(PLOTQA_E_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PLOTQA_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PLOTQA_E_INTERNAL, e.what());
  } catch (...) {
    return fail(PLOTQA_E_INTERNAL, "unknown error");
  }
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || *end || errno == ERANGE)
    throw InvalidArgument(key + ": expected an unsigned integer, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const uint64_t x = parse_u64(key, v);
  if (x > 100000000) throw InvalidArgument(key + ": value too large");
  return static_cast<int>(x);
}

bool is_split_name(const std::string& v) {
  return v == "train" || v == "valid" || v == "test" || v == "all";
}

}  // namespace

extern "C" {

const char* plotqa_version(void) {
  static const std::string v(kVersion);
  return v.c_str();
}

const char* plotqa_last_error(void) { return g_last_error.c_str(); }

const char* plotqa_status_name(plotqa_status s) {
  switch (s) {
    case PLOTQA_OK: return "ok";
    case PLOTQA_E_INVALID_ARGUMENT: return "invalid argument";
    case PLOTQA_E_SCHEMA: return "schema error";
    case PLOTQA_E_IO: return "i/o error";
    case PLOTQA_E_LAYOUT: return "layout error";
    case PLOTQA_E_UNPARSEABLE: return "unparseable question";
    case PLOTQA_E_EXTRACTION: return "extraction error";
    case PLOTQA_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void plotqa_string_free(char* s) { std::free(s); }

plotqa_status plotqa_config_new(plotqa_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new plotqa_config();
  });
}

void plotqa_config_free(plotqa_config* cfg) { delete cfg; }

plotqa_status plotqa_config_set(plotqa_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    const std::string k(key), v(value);
    if (k == "out") {
      cfg->gen.out_dir = v;
      cfg->run.out_dir = v;
    } else if (k == "dataset") {
      cfg->run.dataset_dir = v;
    } else if (k == "n_plots") {
      cfg->gen.n_plots = parse_int(k, v);
    } else if (k == "seed") {
      cfg->gen.seed = parse_u64(k, v);
    } else if (k == "corpus") {
      cfg->gen.corpus_path = v;
    } else if (k == "template_weights") {
      cfg->gen.template_weights_path = v;
    } else if (k == "split") {
      if (is_split_name(v)) {
        cfg->run.split = v;
        cfg->eval_split = v;
      } else {
        try {
          cfg->gen.split = harness::parse_split(v, 0);
        } catch (const SchemaError& e) {
          throw InvalidArgument(std::string("split: ") + e.what());
        }
      }
    } else if (k == "noise") {
      cfg->run.noise = v;
    } else if (k == "system") {
      cfg->run.system = hybrid::system_from_string(v);
    } else if (k == "predictions") {
      cfg->predictions = v;
    } else if (k == "threads") {
      cfg->gen.threads = cfg->run.threads = parse_int(k, v);
    } else {
      throw InvalidArgument("unknown config key '" + k + "'");
    }
  });
}

plotqa_status plotqa_generate(const plotqa_config* cfg, char** summary_json) {
  return guarded([&] {
    require(cfg, "cfg");
    const auto r = runner::generate(cfg->gen);
    put(summary_json, nlohmann::json{{"n_plots", r.n_plots},
                                     {"n_questions", r.n_questions},
                                     {"manifest_fnv1a64", r.manifest_hash}}
                          .dump());
  });
}

plotqa_status plotqa_run(const plotqa_config* cfg, char** report_json) {
  return guarded([&] {
    require(cfg, "cfg");
    if (cfg->run.dataset_dir.empty()) throw InvalidArgument("config key 'dataset' is not set");
    put(report_json, harness::report_json(runner::run(cfg->run)));
  });
}

plotqa_status plotqa_evaluate(const plotqa_config* cfg, char** report_json) {
  return guarded([&] {
    require(cfg, "cfg");
    if (cfg->run.dataset_dir.empty()) throw InvalidArgument("config key 'dataset' is not set");
    if (cfg->predictions.empty()) throw InvalidArgument("config key 'predictions' is not set");
    put(report_json, harness::report_json(runner::evaluate_predictions(
                         cfg->run.dataset_dir, cfg->predictions, cfg->eval_split)));
  });
}

plotqa_status plotqa_report_text(const char* report_json, char** text) {
  return guarded([&] {
    require(report_json, "report_json");
    require(text, "text");
    put(text, harness::report_text(harness::report_from_json(report_json)));
  });
}

plotqa_status plotqa_extract_file(const char* path, const char* noise, char** table_csv,
                                  char** warnings_json) {
  return guarded([&] {
    require(path, "path");
    require(table_csv, "table_csv");
    const auto r = runner::extract_file(path, noise ? noise : "");
    const std::string csv = table_to_csv(r.table);
    const std::string warnings = nlohmann::json(r.warnings).dump();
    *table_csv = dup(csv);
    if (warnings_json) *warnings_json = dup(warnings);
  });
}

plotqa_status plotqa_plot_generate(uint64_t seed, const char* corpus_path, plotqa_plot** out) {
  return guarded([&] {
    require(out, "out");
    const auto corpus = corpus_path && *corpus_path ? corpus::load_corpus(corpus_path)
                                                    : corpus::default_corpus();
    auto p = std::make_unique<plotqa_plot>();
    const auto data = corpus::sample_plot_data(corpus, derive_seed(seed, "data", 0));
    p->spec = plotgen::make_plot_spec(data, derive_seed(seed, "style", 0));
    p->rendered = plotgen::render(p->spec);
    *out = p.release();
  });
}

void plotqa_plot_free(plotqa_plot* p) { delete p; }

plotqa_status plotqa_plot_svg(const plotqa_plot* p, char** svg) {
  return guarded([&] {
    require(p, "plot");
    require(svg, "svg");
    put(svg, p->rendered.svg);
  });
}

plotqa_status plotqa_plot_annotation_json(const plotqa_plot* p, char** json) {
  return guarded([&] {
    require(p, "plot");
    require(json, "json");
    put(json, io::annotation_to_json(p->rendered.annotation));
  });
}

plotqa_status plotqa_plot_table_csv(const plotqa_plot* p, char** csv) {
  return guarded([&] {
    require(p, "plot");
    require(csv, "csv");
    put(csv, table_to_csv(p->rendered.annotation.gold_table));
  });
}

plotqa_status plotqa_plot_questions_jsonl(const plotqa_plot* p, uint64_t seed, char** jsonl) {
  return guarded([&] {
    require(p, "plot");
    require(jsonl, "jsonl");
    const auto qs = qgen::instantiate(p->spec, qgen::default_templates(), seed);
    std::string out;
    for (size_t k = 0; k < qs.size(); ++k)
      out += io::question_to_json({"0-" + std::to_string(k), 0, "test", qs[k]}) + "\n";
    put(jsonl, out);
  });
}

plotqa_status plotqa_detections_simulate(const plotqa_plot* p, const char* noise, uint64_t seed,
                                         plotqa_detections** out) {
  return guarded([&] {
    require(p, "plot");
    require(out, "out");
    auto model = io::load_noise(noise && *noise ? noise : "paper-like");
    model.seed = seed;
    *out = new plotqa_detections(detsim::perturb(p->rendered.annotation, model));
  });
}

plotqa_status plotqa_detections_from_json(const char* json, plotqa_detections** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new plotqa_detections(io::detections_from_json(json));
  });
}

void plotqa_detections_free(plotqa_detections* d) { delete d; }

plotqa_status plotqa_detections_to_json(const plotqa_detections* d, char** json) {
  return guarded([&] {
    require(d, "detections");
    require(json, "json");
    put(json, io::detections_to_json(d->view.detections()));
  });
}

plotqa_status plotqa_detections_table_csv(const plotqa_detections* d, char** csv) {
  return guarded([&] {
    require(d, "detections");
    require(csv, "csv");
    put(csv, table_to_csv(d->view.table()));
  });
}

plotqa_status plotqa_detections_map(const plotqa_detections* d, const plotqa_plot* gold,
                                    double iou_threshold, double* map) {
  return guarded([&] {
    require(d, "detections");
    require(gold, "gold");
    require(map, "map");
    if (!(iou_threshold > 0 && iou_threshold <= 1))
      throw InvalidArgument("iou_threshold must be in (0, 1]");
    *map = detsim::average_precision(d->view.detections(), gold->rendered.annotation,
                                     iou_threshold)
               .map;
  });
}

plotqa_status plotqa_answer_question(const plotqa_detections* d, const char* question,
                                     const char* system, plotqa_answer** out) {
  return guarded([&] {
    require(d, "detections");
    require(question, "question");
    require(out, "out");
    const auto sys = system ? hybrid::system_from_string(system) : hybrid::System::hybrid;
    *out = new plotqa_answer{hybrid::answer(question, d->view, sys)};
  });
}

plotqa_status plotqa_answer_from_json(const char* json, plotqa_answer** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new plotqa_answer{io::answer_from_json(json)};
  });
}

void plotqa_answer_free(plotqa_answer* a) { delete a; }

const char* plotqa_answer_kind(const plotqa_answer* a) {
  if (!a) return "unavailable";
  switch (a->a.kind) {
    case Answer::Kind::boolean: return "boolean";
    case Answer::Kind::text: return "text";
    case Answer::Kind::number: return "number";
    case Answer::Kind::unavailable: return "unavailable";
  }
  return "unavailable";
}

plotqa_status plotqa_answer_display(const plotqa_answer* a, char** text) {
  return guarded([&] {
    require(a, "answer");
    require(text, "text");
    put(text, a->a.display());
  });
}

plotqa_status plotqa_answer_number(const plotqa_answer* a, double* value) {
  return guarded([&] {
    require(a, "answer");
    require(value, "value");
    if (a->a.kind != Answer::Kind::number) throw InvalidArgument("answer is not a number");
    *value = a->a.number;
  });
}

plotqa_status plotqa_answer_to_json(const plotqa_answer* a, char** json) {
  return guarded([&] {
    require(a, "answer");
    require(json, "json");
    put(json, io::answer_to_json(a->a));
  });
}

plotqa_status plotqa_score_answer(const plotqa_answer* predicted, const plotqa_answer* gold,
                                  int* correct) {
  return guarded([&] {
    require(predicted, "predicted");
    require(gold, "gold");
    require(correct, "correct");
    *correct = harness::score_answer(predicted->a, gold->a) ? 1 : 0;
  });
}

plotqa_status plotqa_corrupt_text(const char* text, const char* noise, uint64_t seed, char** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    const auto model = io::load_noise(noise && *noise ? noise : "paper-like");
    put(out, detsim::corrupt_text(text, model, seed));
  });
}

}  // extern "C"
