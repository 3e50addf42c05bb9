#include "plotqa/harness.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"

namespace plotqa::harness {

using nlohmann::json;
using qgen::AnswerType;
using qgen::Category;

bool score_answer(const Answer& pred, const Answer& gold) {
  if (!pred.available() || !gold.available()) return false;
  if (gold.kind == Answer::Kind::number) {
    std::optional<double> v;
    if (pred.kind == Answer::Kind::number) v = pred.number;
    else if (pred.kind == Answer::Kind::text) v = parse_number(trim(pred.text));
    if (v) {
      if (gold.number == 0) return *v == 0;
      // The slack keeps pred = 1.05 * gold inside despite rounding.
      return std::fabs(*v - gold.number) <= kRelativeTolerance * std::fabs(gold.number) * (1 + 1e-12);
    }
  }
  return to_lower(trim(pred.display())) == to_lower(trim(gold.display()));
}

void validate(const SplitSpec& s) {
  double sum = 0;
  for (double r : s.ratios) {
    if (!(r >= 0)) throw SchemaError("split ratios must be non-negative");
    sum += r;
  }
  if (std::fabs(sum - 1) > 1e-9) throw SchemaError("split ratios must sum to 1");
}

SplitSpec parse_split(std::string_view text, uint64_t seed) {
  const auto parts = plotqa::split(text, ',');
  if (parts.size() != 3) throw SchemaError("split needs three comma-separated ratios");
  SplitSpec s;
  s.seed = seed;
  for (size_t i = 0; i < 3; ++i) {
    const auto v = parse_number(trim(parts[i]));
    if (!v) throw SchemaError("split ratio '" + parts[i] + "' is not a number");
    s.ratios[i] = *v;
  }
  validate(s);
  return s;
}

Split split(size_t n, const SplitSpec& spec) {
  validate(spec);
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(spec.seed, "split"));
  rng.shuffle(idx);
  const size_t n_train = std::min(n, static_cast<size_t>(std::llround(spec.ratios[0] * n)));
  const size_t n_valid =
      std::min(n - n_train, static_cast<size_t>(std::llround(spec.ratios[1] * n)));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.valid.assign(idx.begin() + n_train, idx.begin() + n_train + n_valid);
  s.test.assign(idx.begin() + n_train + n_valid, idx.end());
  // A zero test ratio leaves rounding leftovers in validation rather than test.
  if (spec.ratios[2] == 0) {
    s.valid.insert(s.valid.end(), s.test.begin(), s.test.end());
    s.test.clear();
  }
  for (auto* part : {&s.train, &s.valid, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

std::optional<double> Cell::accuracy() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / total;
}

namespace {

void finish(EvalReport& r) {
  r.overall_accuracy = r.n_questions ? static_cast<double>(r.n_correct) / r.n_questions : 0;
}

bool is_na(int c, int a) {
  return c == static_cast<int>(Category::structural) && a == static_cast<int>(AnswerType::open_vocab);
}

}  // namespace

EvalReport evaluate(const std::vector<qgen::QuestionInstance>& questions,
                    const std::function<Answer(size_t)>& system) {
  if (questions.empty()) throw Error("evaluate: no questions");
  EvalReport r;
  for (size_t i = 0; i < questions.size(); ++i) {
    const auto& q = questions[i];
    const bool ok = score_answer(system(i), q.gold);
    auto& cell = r.grid[static_cast<int>(q.category)][static_cast<int>(q.answer_type)];
    cell.total++;
    cell.correct += ok;
    r.n_questions++;
    r.n_correct += ok;
  }
  finish(r);
  return r;
}

void merge(EvalReport& into, const EvalReport& done) {
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a) {
      into.grid[c][a].correct += done.grid[c][a].correct;
      into.grid[c][a].total += done.grid[c][a].total;
    }
  into.n_questions += done.n_questions;
  into.n_correct += done.n_correct;
  finish(into);
}

std::string report_json(const EvalReport& r) {
  json j;
  j["system"] = r.system;
  j["n_questions"] = r.n_questions;
  j["n_correct"] = r.n_correct;
  j["overall_accuracy"] = r.overall_accuracy;
  json grid = json::object();
  for (auto c : qgen::kCategories) {
    json row = json::object();
    for (auto a : qgen::kAnswerTypes) {
      const auto& cell = r.grid[static_cast<int>(c)][static_cast<int>(a)];
      json jc;
      jc["correct"] = cell.correct;
      jc["total"] = cell.total;
      const auto acc = cell.accuracy();
      jc["accuracy"] = is_na(static_cast<int>(c), static_cast<int>(a)) || !acc ? json(nullptr) : json(*acc);
      row[std::string(qgen::to_string(a))] = jc;
    }
    grid[std::string(qgen::to_string(c))] = row;
  }
  j["accuracy_by"] = grid;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["map"] = {{"0.5", opt(r.map50)}, {"0.75", opt(r.map75)}, {"0.9", opt(r.map90)}};
  j["ocr_accuracy"] = opt(r.ocr_accuracy);
  j["mean_table_f1"] = opt(r.mean_table_f1);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  EvalReport r;
  try {
    const auto j = json::parse(text);
    r.system = j.value("system", "");
    r.n_questions = j.at("n_questions").get<int>();
    r.n_correct = j.at("n_correct").get<int>();
    const auto& grid = j.at("accuracy_by");
    for (auto c : qgen::kCategories)
      for (auto a : qgen::kAnswerTypes) {
        const auto& jc = grid.at(std::string(qgen::to_string(c))).at(std::string(qgen::to_string(a)));
        auto& cell = r.grid[static_cast<int>(c)][static_cast<int>(a)];
        cell.correct = jc.at("correct").get<int>();
        cell.total = jc.at("total").get<int>();
      }
    auto opt = [](const json& v) -> std::optional<double> {
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    const auto& m = j.at("map");
    r.map50 = opt(m.at("0.5"));
    r.map75 = opt(m.at("0.75"));
    r.map90 = opt(m.at("0.9"));
    r.ocr_accuracy = opt(j.at("ocr_accuracy"));
    r.mean_table_f1 = opt(j.at("mean_table_f1"));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
  finish(r);
  return r;
}

std::string report_text(const EvalReport& r) {
  std::string out;
  char buf[160];
  auto pct = [](std::optional<double> v) {
    char b[16];
    if (!v) return std::string("NA");
    std::snprintf(b, sizeof b, "%.2f", 100 * *v);
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf, "system: %s\nquestions: %d  correct: %d  accuracy: %s%%\n\n",
                r.system.empty() ? "-" : r.system.c_str(), r.n_questions, r.n_correct,
                pct(r.overall_accuracy).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %14s %14s %14s\n", "", "yes_no", "fixed_vocab", "open_vocab");
  out += buf;
  for (auto c : qgen::kCategories) {
    std::string cells[3];
    for (auto a : qgen::kAnswerTypes) {
      const int ci = static_cast<int>(c), ai = static_cast<int>(a);
      const auto& cell = r.grid[ci][ai];
      cells[ai] = is_na(ci, ai) ? "NA" : pct(cell.accuracy()) + " (" + std::to_string(cell.total) + ")";
    }
    std::snprintf(buf, sizeof buf, "%-16s %14s %14s %14s\n", std::string(qgen::to_string(c)).c_str(),
                  cells[0].c_str(), cells[1].c_str(), cells[2].c_str());
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "mAP@0.5: %s  mAP@0.75: %s  mAP@0.9: %s\n", pct(r.map50).c_str(),
                pct(r.map75).c_str(), pct(r.map90).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "OCR accuracy: %s  mean table F1: %s\n", pct(r.ocr_accuracy).c_str(),
                r.mean_table_f1 ? std::to_string(*r.mean_table_f1).substr(0, 6).c_str() : "NA");
  out += buf;
  return out;
}

}  // namespace plotqa::harness
