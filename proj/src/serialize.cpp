#include "plotqa/serialize.hpp"

#include <filesystem>
#include <set>

#include "json.hpp"

namespace plotqa::io {

using nlohmann::json;
using plotgen::ElementClass;

namespace {

template <class F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

json bbox_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BBox bbox_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw SchemaError("bbox must be [x, y, w, h]");
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!(b.w >= 0 && b.h >= 0)) throw SchemaError("bbox has negative size");
  return b;
}

json table_json(const SemiStructuredTable& t) {
  json cells = json::array();
  for (const auto& row : t.cells) {
    json r = json::array();
    for (const auto& c : row) r.push_back(c ? json(*c) : json(nullptr));
    cells.push_back(r);
  }
  return {{"row_headers", t.row_headers}, {"col_headers", t.col_headers}, {"cells", cells}};
}

SemiStructuredTable table_from(const json& j) {
  SemiStructuredTable t(j.at("row_headers").get<std::vector<std::string>>(),
                        j.at("col_headers").get<std::vector<std::string>>());
  const auto& cells = j.at("cells");
  if (cells.size() != t.rows()) throw SchemaError("table cells do not match row headers");
  for (size_t r = 0; r < t.rows(); ++r) {
    if (cells[r].size() != t.cols()) throw SchemaError("table row width does not match headers");
    for (size_t c = 0; c < t.cols(); ++c)
      if (!cells[r][c].is_null()) t.cells[r][c] = cells[r][c].get<double>();
  }
  return t;
}

json answer_json(const Answer& a) {
  json j{{"kind", std::string(to_string(a.kind))}};
  switch (a.kind) {
    case Answer::Kind::boolean: j["value"] = a.flag; break;
    case Answer::Kind::text: j["value"] = a.text; break;
    case Answer::Kind::number: j["value"] = a.number; break;
    case Answer::Kind::unavailable: j["reason"] = a.reason; break;
  }
  return j;
}

Answer answer_from(const json& j) {
  switch (answer_kind_from_string(j.at("kind").get<std::string>())) {
    case Answer::Kind::boolean: return Answer::yes_no(j.at("value").get<bool>());
    case Answer::Kind::text: return Answer::of_text(j.at("value").get<std::string>());
    case Answer::Kind::number: return Answer::of_number(j.at("value").get<double>());
    case Answer::Kind::unavailable: return Answer::unavailable(j.value("reason", ""));
  }
  return Answer::unavailable();
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

}  // namespace

std::string table_to_json(const SemiStructuredTable& t) { return table_json(t).dump(2) + "\n"; }

SemiStructuredTable table_from_json(std::string_view s) {
  return guarded("table", [&] { return table_from(json::parse(s)); });
}

std::string answer_to_json(const Answer& a) { return answer_json(a).dump(); }

Answer answer_from_json(std::string_view s) {
  return guarded("answer", [&] { return answer_from(json::parse(s)); });
}

std::string annotation_to_json(const plotgen::PlotAnnotation& a) {
  json style{{"grid", a.style.grid},
             {"font_size", a.style.font_size},
             {"tick_notation", std::string(to_string(a.style.tick_notation))},
             {"line_style", std::string(to_string(a.style.line_style))},
             {"marker", std::string(to_string(a.style.marker))},
             {"legend_position", std::string(to_string(a.style.legend_position))},
             {"series_colors", a.style.series_colors},
             {"canvas_width", a.style.canvas_width},
             {"canvas_height", a.style.canvas_height}};
  json elements = json::array();
  for (const auto& e : a.elements) {
    json je{{"class", std::string(to_string(e.cls))}, {"bbox", bbox_json(e.bbox)}};
    put_optional(je, "text", e.text);
    put_optional(je, "color", e.color);
    put_optional(je, "series_index", e.series_index);
    put_optional(je, "x_index", e.x_index);
    elements.push_back(je);
  }
  json j{{"plot_type", std::string(to_string(a.plot_type))},
         {"style", style},
         {"elements", elements},
         {"gold_table", table_json(a.gold_table)}};
  return j.dump(1) + "\n";
}

plotgen::PlotAnnotation annotation_from_json(std::string_view s) {
  return guarded("annotation", [&] {
    const auto j = json::parse(s);
    plotgen::PlotAnnotation a;
    a.plot_type = plotgen::plot_type_from_string(j.at("plot_type").get<std::string>());
    const auto& st = j.at("style");
    a.style.grid = st.at("grid").get<bool>();
    a.style.font_size = st.at("font_size").get<double>();
    a.style.tick_notation = plotgen::tick_notation_from_string(st.at("tick_notation").get<std::string>());
    a.style.line_style = plotgen::line_style_from_string(st.at("line_style").get<std::string>());
    a.style.marker = plotgen::marker_from_string(st.at("marker").get<std::string>());
    a.style.legend_position =
        plotgen::legend_position_from_string(st.at("legend_position").get<std::string>());
    a.style.series_colors = st.at("series_colors").get<std::vector<int>>();
    a.style.canvas_width = st.at("canvas_width").get<int>();
    a.style.canvas_height = st.at("canvas_height").get<int>();
    for (const auto& je : j.at("elements")) {
      plotgen::VisualElement e;
      e.cls = plotgen::element_class_from_string(je.at("class").get<std::string>());
      e.bbox = bbox_from(je.at("bbox"));
      e.text = get_optional<std::string>(je, "text");
      e.color = get_optional<int>(je, "color");
      e.series_index = get_optional<int>(je, "series_index");
      e.x_index = get_optional<int>(je, "x_index");
      a.elements.push_back(std::move(e));
    }
    a.gold_table = table_from(j.at("gold_table"));
    return a;
  });
}

std::string detections_to_json(const detsim::DetectionSet& d) {
  json dets = json::array();
  for (const auto& x : d.detections) {
    json jx{{"class", std::string(to_string(x.cls))}, {"bbox", bbox_json(x.bbox)}, {"score", x.score}};
    put_optional(jx, "text", x.text);
    put_optional(jx, "color", x.color);
    if (x.source >= 0) jx["source"] = x.source;
    dets.push_back(jx);
  }
  json j{{"plot_type", std::string(to_string(d.plot_type))},
         {"grid", d.grid},
         {"canvas_width", d.canvas_width},
         {"canvas_height", d.canvas_height},
         {"detections", dets}};
  return j.dump(1) + "\n";
}

detsim::DetectionSet detections_from_json(std::string_view s) {
  return guarded("detections", [&] {
    const auto j = json::parse(s);
    // An annotation file is accepted too and read as exact detections.
    if (j.contains("elements")) return detsim::from_annotation(annotation_from_json(s));
    detsim::DetectionSet d;
    d.plot_type = plotgen::plot_type_from_string(j.value("plot_type", "vbar"));
    d.grid = j.value("grid", false);
    d.canvas_width = j.value("canvas_width", 800);
    d.canvas_height = j.value("canvas_height", 600);
    for (const auto& jx : j.at("detections")) {
      detsim::Detection x;
      x.cls = plotgen::element_class_from_string(jx.at("class").get<std::string>());
      x.bbox = bbox_from(jx.at("bbox"));
      x.score = jx.value("score", 1.0);
      if (!(x.score > 0 && x.score <= 1)) throw SchemaError("detection score must be in (0,1]");
      x.text = get_optional<std::string>(jx, "text");
      x.color = get_optional<int>(jx, "color");
      x.source = jx.value("source", -1);
      d.detections.push_back(std::move(x));
    }
    return d;
  });
}

namespace {

const std::set<std::string> kNoiseKeys = {
    "box_jitter_sigma", "box_jitter_rel",    "class_sigma_scale", "drop_prob",
    "misclass_prob",    "color_flip_prob",   "ocr_char_sub_prob", "ocr_truncate_prob",
    "ocr_sign_digit_prob", "seed"};

}  // namespace

std::string noise_to_json(const detsim::NoiseModel& n) {
  json scale = json::object();
  for (auto c : plotgen::kElementClasses)
    scale[std::string(to_string(c))] = n.class_sigma_scale[static_cast<int>(c)];
  json j{{"box_jitter_sigma", n.box_jitter_sigma},
         {"box_jitter_rel", n.box_jitter_rel},
         {"class_sigma_scale", scale},
         {"drop_prob", n.drop_prob},
         {"misclass_prob", n.misclass_prob},
         {"color_flip_prob", n.color_flip_prob},
         {"ocr_char_sub_prob", n.ocr_char_sub_prob},
         {"ocr_truncate_prob", n.ocr_truncate_prob},
         {"ocr_sign_digit_prob", n.ocr_sign_digit_prob},
         {"seed", n.seed}};
  return j.dump(2) + "\n";
}

detsim::NoiseModel noise_from_json(std::string_view s) {
  return guarded("noise", [&] {
    const auto j = json::parse(s);
    if (!j.is_object()) throw SchemaError("noise model must be a JSON object");
    for (const auto& [k, v] : j.items())
      if (!kNoiseKeys.count(k)) throw SchemaError("unknown noise field '" + k + "'");
    detsim::NoiseModel n;
    n.box_jitter_sigma = j.value("box_jitter_sigma", 0.0);
    n.box_jitter_rel = j.value("box_jitter_rel", 0.0);
    if (j.contains("class_sigma_scale"))
      for (const auto& [k, v] : j.at("class_sigma_scale").items())
        n.class_sigma_scale[static_cast<int>(plotgen::element_class_from_string(k))] = v.get<double>();
    n.drop_prob = j.value("drop_prob", 0.0);
    n.misclass_prob = j.value("misclass_prob", 0.0);
    n.color_flip_prob = j.value("color_flip_prob", 0.0);
    n.ocr_char_sub_prob = j.value("ocr_char_sub_prob", 0.0);
    n.ocr_truncate_prob = j.value("ocr_truncate_prob", 0.0);
    n.ocr_sign_digit_prob = j.value("ocr_sign_digit_prob", 0.0);
    n.seed = j.value("seed", uint64_t{0});
    detsim::validate(n);
    return n;
  });
}

detsim::NoiseModel load_noise(const std::string& preset_or_path) {
  if (preset_or_path == "zero" || preset_or_path == "paper-like")
    return detsim::noise_preset(preset_or_path);
  if (!std::filesystem::exists(preset_or_path))
    throw SchemaError("noise '" + preset_or_path + "' is neither a preset nor a file");
  return noise_from_json(read_file(preset_or_path));
}

std::string question_to_json(const StoredQuestion& s) {
  json j{{"id", s.id},
         {"plot", s.plot},
         {"split", s.split},
         {"template_id", s.q.template_id},
         {"category", std::string(qgen::to_string(s.q.category))},
         {"answer_type", std::string(qgen::to_string(s.q.answer_type))},
         {"question", s.q.text},
         {"bindings", s.q.bindings},
         {"answer", answer_json(s.q.gold)}};
  return j.dump();
}

StoredQuestion question_from_json(std::string_view line) {
  return guarded("question", [&] {
    const auto j = json::parse(line);
    StoredQuestion s;
    s.id = j.at("id").get<std::string>();
    s.plot = j.at("plot").get<int>();
    s.split = j.at("split").get<std::string>();
    s.q.template_id = j.at("template_id").get<int>();
    s.q.category = qgen::category_from_string(j.at("category").get<std::string>());
    s.q.answer_type = qgen::answer_type_from_string(j.at("answer_type").get<std::string>());
    s.q.text = j.at("question").get<std::string>();
    s.q.bindings = j.at("bindings").get<qgen::Bindings>();
    s.q.gold = answer_from(j.at("answer"));
    return s;
  });
}

std::vector<StoredQuestion> questions_from_jsonl(std::string_view text) {
  std::vector<StoredQuestion> out;
  int line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(question_from_json(line));
    } catch (const SchemaError& e) {
      throw SchemaError(e.what(), line_no);
    }
  }
  return out;
}

}  // namespace plotqa::io
