#include "plotqa/runner.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "plotqa/corpus.hpp"
#include "plotqa/serialize.hpp"
#include "plotqa/version.hpp"

namespace plotqa::runner {

namespace fs = std::filesystem;
using nlohmann::json;

std::string plot_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", index);
  return buf;
}

namespace {

int thread_count(int requested, int work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, std::min(n, work));
}

// Calls f(i) for i in [0, n) on a small pool. The first exception is rethrown.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = thread_count(threads, n);
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError("cannot create directory " + p.string());
}

std::string split_name(const harness::Split& s, size_t i) {
  if (std::binary_search(s.train.begin(), s.train.end(), i)) return "train";
  if (std::binary_search(s.valid.begin(), s.valid.end(), i)) return "valid";
  return "test";
}

}  // namespace

GenerateResult generate(const GenerateConfig& cfg) {
  if (cfg.n_plots < 1) throw Error("n_plots must be at least 1");
  if (cfg.out_dir.empty()) throw Error("no output directory");
  auto split_spec = cfg.split;
  split_spec.seed = cfg.seed;
  harness::validate(split_spec);

  const std::string corpus_text =
      cfg.corpus_path.empty() ? std::string(corpus::default_corpus_text()) : read_file(cfg.corpus_path);
  const auto corpus = corpus::parse_corpus(corpus_text);
  if (corpus.empty()) throw SchemaError("corpus has no indicator variables");
  std::string weights_text;
  qgen::TemplateWeights weights = qgen::default_weights();
  if (!cfg.template_weights_path.empty()) {
    weights_text = read_file(cfg.template_weights_path);
    weights = qgen::weights_from_json(weights_text);
  }
  const auto& templates = qgen::default_templates();

  const fs::path out(cfg.out_dir);
  for (const char* sub : {"plots", "annotations", "tables"}) ensure_dir(out / sub);

  const auto split = harness::split(static_cast<size_t>(cfg.n_plots), split_spec);
  std::vector<std::string> question_lines(cfg.n_plots);
  std::vector<int> question_counts(cfg.n_plots);
  std::vector<uint64_t> plot_hashes(cfg.n_plots);
  parallel_for(cfg.n_plots, cfg.threads, [&](int i) {
    const auto data = corpus::sample_plot_data(corpus, derive_seed(cfg.seed, "data", i));
    const auto spec = plotgen::make_plot_spec(data, derive_seed(cfg.seed, "style", i));
    const auto rendered = plotgen::render(spec);
    const auto stem = plot_stem(i);
    const auto annotation = io::annotation_to_json(rendered.annotation);
    const auto csv = table_to_csv(rendered.annotation.gold_table);
    write_file((out / "plots" / (stem + ".svg")).string(), rendered.svg);
    write_file((out / "annotations" / (stem + ".json")).string(), annotation);
    write_file((out / "tables" / (stem + ".csv")).string(), csv);
    plot_hashes[i] = fnv1a64(rendered.svg + annotation + csv);

    const auto qs = qgen::instantiate(spec, templates, derive_seed(cfg.seed, "questions", i), weights);
    std::string lines;
    const std::string part = split_name(split, static_cast<size_t>(i));
    for (size_t k = 0; k < qs.size(); ++k) {
      io::StoredQuestion sq{stem + "-" + std::to_string(k), i, part, qs[k]};
      lines += io::question_to_json(sq) + "\n";
    }
    question_lines[i] = std::move(lines);
    question_counts[i] = static_cast<int>(qs.size());
  });

  std::string questions;
  GenerateResult res;
  res.n_plots = cfg.n_plots;
  for (int i = 0; i < cfg.n_plots; ++i) {
    questions += question_lines[i];
    res.n_questions += question_counts[i];
  }
  write_file((out / "questions.jsonl").string(), questions);

  std::string plots_digest;
  for (auto h : plot_hashes) plots_digest += hex64(h);
  json manifest{
      {"format", 1},
      {"tool_version", std::string(kVersion)},
      {"seed", cfg.seed},
      {"n_plots", cfg.n_plots},
      {"n_questions", res.n_questions},
      {"split",
       {{"ratios", split_spec.ratios},
        {"train", split.train.size()},
        {"valid", split.valid.size()},
        {"test", split.test.size()}}},
      {"corpus",
       {{"source", cfg.corpus_path.empty() ? "builtin" : cfg.corpus_path},
        {"fnv1a64", hex64(fnv1a64(corpus_text))},
        {"indicators", corpus.size()}}},
      {"template_weights",
       {{"source", cfg.template_weights_path.empty() ? "default" : cfg.template_weights_path},
        {"fnv1a64", hex64(fnv1a64(weights_text))}}},
      {"content",
       {{"questions_fnv1a64", hex64(fnv1a64(questions))},
        {"plots_fnv1a64", hex64(fnv1a64(plots_digest))}}},
  };
  const std::string manifest_text = manifest.dump(2) + "\n";
  write_file((out / "manifest.json").string(), manifest_text);
  res.manifest_hash = hex64(fnv1a64(manifest_text));
  return res;
}

namespace {

struct PlotOutcome {
  harness::EvalReport report;
  std::string predictions;
  detsim::ApAccumulator ap50{0.5}, ap75{0.75}, ap90{0.9};
  long ocr_ok = 0, ocr_n = 0;
  double f1 = 0;
};

bool in_split(const std::string& want, const std::string& have) {
  return want == "all" || want == have;
}

}  // namespace

harness::EvalReport run(const RunConfig& cfg) {
  if (cfg.split != "all" && cfg.split != "train" && cfg.split != "valid" && cfg.split != "test")
    throw Error("unknown split '" + cfg.split + "'");
  const fs::path ds(cfg.dataset_dir);
  if (!fs::exists(ds / "manifest.json")) throw IoError("no manifest.json in " + cfg.dataset_dir);
  const auto base_noise = io::load_noise(cfg.noise);
  const auto questions = io::questions_from_jsonl(read_file((ds / "questions.jsonl").string()));

  std::map<int, std::vector<const io::StoredQuestion*>> by_plot;
  for (const auto& q : questions)
    if (in_split(cfg.split, q.split)) by_plot[q.plot].push_back(&q);
  if (by_plot.empty()) throw SchemaError("no questions in split '" + cfg.split + "'");
  std::vector<int> plots;
  for (const auto& [p, qs] : by_plot) plots.push_back(p);

  std::vector<PlotOutcome> outcomes(plots.size());
  parallel_for(static_cast<int>(plots.size()), cfg.threads, [&](int k) {
    const int p = plots[k];
    const auto annotation =
        io::annotation_from_json(read_file((ds / "annotations" / (plot_stem(p) + ".json")).string()));
    auto noise = base_noise;
    noise.seed = derive_seed(base_noise.seed, "plot", static_cast<uint64_t>(p));
    const auto d = detsim::perturb(annotation, noise);
    auto& o = outcomes[k];
    o.ap50.add(d, annotation);
    o.ap75.add(d, annotation);
    o.ap90.add(d, annotation);
    const auto ocr = detsim::ocr_accuracy(d, annotation);
    o.ocr_n = ocr.n;
    o.ocr_ok = std::lround(ocr.total * ocr.n);
    const hybrid::PlotView view(d);
    o.f1 = sie::table_f1(view.table(), annotation.gold_table).f1;

    const auto& qs = by_plot.at(p);
    std::vector<qgen::QuestionInstance> inst;
    for (const auto* q : qs) inst.push_back(q->q);
    o.report = harness::evaluate(inst, [&](size_t i) {
      const auto a = hybrid::answer(qs[i]->q.text, view, cfg.system);
      json line{{"id", qs[i]->id},
                {"branch", std::string(hybrid::to_string(hybrid::route(qs[i]->q.text).branch))},
                {"prediction", json::parse(io::answer_to_json(a))},
                {"correct", harness::score_answer(a, qs[i]->q.gold)}};
      o.predictions += line.dump() + "\n";
      return a;
    });
  });

  harness::EvalReport report;
  report.system = std::string(hybrid::to_string(cfg.system));
  detsim::ApAccumulator ap50(0.5), ap75(0.75), ap90(0.9);
  long ocr_ok = 0, ocr_n = 0;
  double f1 = 0;
  std::string predictions;
  for (const auto& o : outcomes) {
    harness::merge(report, o.report);
    ap50.merge(o.ap50);
    ap75.merge(o.ap75);
    ap90.merge(o.ap90);
    ocr_ok += o.ocr_ok;
    ocr_n += o.ocr_n;
    f1 += o.f1;
    predictions += o.predictions;
  }
  report.map50 = ap50.result().map;
  report.map75 = ap75.result().map;
  report.map90 = ap90.result().map;
  report.ocr_accuracy = ocr_n ? static_cast<double>(ocr_ok) / ocr_n : 1.0;
  report.mean_table_f1 = f1 / outcomes.size();

  if (!cfg.out_dir.empty()) {
    const fs::path out(cfg.out_dir);
    ensure_dir(out);
    write_file((out / "predictions.jsonl").string(), predictions);
    write_file((out / "report.json").string(), harness::report_json(report));
    write_file((out / "report.txt").string(), harness::report_text(report));
  }
  return report;
}

ExtractResult extract_file(const std::string& path, const std::string& noise) {
  auto d = io::detections_from_json(read_file(path));
  if (!noise.empty()) {
    const auto text = read_file(path);
    const auto j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("elements"))
      throw Error("noise can only be applied to an annotation file");
    d = detsim::perturb(io::annotation_from_json(text), io::load_noise(noise));
  }
  if (d.detections.empty()) return {SemiStructuredTable{}, {"no detections; table is empty"}};
  const auto ex = sie::extract(d);
  return {ex.table, ex.warnings};
}

harness::EvalReport evaluate_predictions(const std::string& dataset_dir,
                                         const std::string& predictions_path,
                                         const std::string& split) {
  const auto questions =
      io::questions_from_jsonl(read_file((fs::path(dataset_dir) / "questions.jsonl").string()));
  std::map<std::string, Answer> preds;
  int line_no = 0;
  for (const auto& line : plotqa::split(read_file(predictions_path), '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto& p = j.at("prediction");
      preds[j.at("id").get<std::string>()] =
          p.is_object() ? io::answer_from_json(p.dump())
                        : p.is_string() ? Answer::of_text(p.get<std::string>())
                        : p.is_boolean() ? Answer::yes_no(p.get<bool>())
                                         : Answer::of_number(p.get<double>());
    } catch (const json::exception& e) {
      throw SchemaError(std::string("predictions: ") + e.what(), line_no);
    }
  }
  std::vector<qgen::QuestionInstance> inst;
  std::vector<Answer> answers;
  for (const auto& q : questions) {
    if (!in_split(split, q.split)) continue;
    inst.push_back(q.q);
    const auto it = preds.find(q.id);
    answers.push_back(it == preds.end() ? Answer::unavailable("no prediction") : it->second);
  }
  if (inst.empty()) throw SchemaError("no questions in split '" + split + "'");
  auto r = harness::evaluate(inst, [&](size_t i) { return answers[i]; });
  r.system = "external";
  return r;
}

}  // namespace plotqa::runner
