#include "plotqa/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "embedded_data.hpp"
#include "plotqa/common.hpp"

namespace plotqa::corpus {

std::string_view to_string(ValueKind k) {
  switch (k) {
    case ValueKind::integer: return "integer";
    case ValueKind::floating: return "float";
    case ValueKind::percentage: return "percentage";
  }
  return "float";
}

ValueKind value_kind_from_string(std::string_view s) {
  if (s == "integer") return ValueKind::integer;
  if (s == "float") return ValueKind::floating;
  if (s == "percentage") return ValueKind::percentage;
  throw SchemaError("unknown value kind '" + std::string(s) + "'");
}

const std::vector<EntityKind>& entity_kinds() {
  static const std::vector<EntityKind> kinds = {
      {"countries", "country",
       {"Afghanistan", "Angola", "Argentina", "Australia", "Bangladesh", "Barbados",
        "Belgium", "Bhutan", "Brazil", "Bulgaria", "Canada", "Chile", "Costa Rica",
        "Cuba", "Denmark", "Ecuador", "Egypt", "Ethiopia", "Finland", "Ghana",
        "Iceland", "India", "Indonesia", "Kazakhstan", "Kenya", "Kuwait", "Lebanon",
        "Liberia", "Macedonia", "Malaysia", "Mexico", "Myanmar", "Nepal", "Norway",
        "Peru", "Poland", "Portugal", "Serbia", "Switzerland", "Thailand", "Uganda",
        "Uruguay"}},
      {"cities", "city",
       {"Mumbai", "Delhi", "Chennai", "Kolkata", "Pune", "Jaipur", "Lucknow",
        "Nagpur", "Bhopal", "Patna", "Indore", "Surat", "Kochi", "Madurai",
        "Guwahati", "Ranchi", "Raipur", "Vadodara"}},
      {"states", "state",
       {"Assam", "Bihar", "Goa", "Gujarat", "Haryana", "Kerala", "Karnataka",
        "Manipur", "Mizoram", "Odisha", "Punjab", "Rajasthan", "Sikkim", "Tripura",
        "Telangana", "Uttarakhand"}},
      {"districts", "district",
       {"Anantapur", "Bellary", "Chittoor", "Dharwad", "Guntur", "Hassan",
        "Kadapa", "Kolar", "Kurnool", "Mandya", "Mysore", "Nellore", "Raichur",
        "Shimoga", "Tumkur", "Udupi"}},
      {"companies", "company",
       {"Acme Corp", "Apex Systems", "Blue River", "Crescent Labs", "Delta Works",
        "Everest Foods", "Falcon Motors", "Granite Capital", "Horizon Media",
        "Ironwood", "Juniper Health", "Keystone Energy", "Lumen Tech",
        "Meridian", "Northwind", "Orion Steel"}},
      {"operators", "operator",
       {"Airtel", "Vodafone", "Idea", "Reliance", "BSNL", "Jio", "Aircel",
        "Tata Docomo", "MTNL", "Telenor", "Uninor", "Videocon"}},
      {"food items", "food item",
       {"Banana", "Rice", "Wheat", "Lentils", "Spinach", "Potato", "Cheese",
        "Yogurt", "Almonds", "Oats", "Chicken", "Salmon", "Tofu", "Apple",
        "Carrot", "Peanuts"}},
      {"schools", "school",
       {"Sample 31", "Sample 32", "Sample 33", "Sample 34", "Sample 35",
        "Sample 36", "Sample 37", "Sample 38", "Sample 39", "Sample 40",
        "Sample 41", "Sample 42", "Sample 43", "Sample 44"}},
      {"races", "race",
       {"Asian", "Hispanic", "White", "Black", "Native American", "Pacific Islander",
        "Multiracial"}},
  };
  return kinds;
}

const EntityKind* find_entity_kind(std::string_view plural) {
  for (const auto& k : entity_kinds())
    if (k.plural == plural) return &k;
  if (plural == "years") return &years_kind();
  return nullptr;
}

const EntityKind& years_kind() {
  static const EntityKind years = [] {
    EntityKind k{"years", "year", {}};
    for (int y = kFirstYear; y <= kLastYear; ++y) k.names.push_back(std::to_string(y));
    return k;
  }();
  return years;
}

void validate(const IndicatorVariable& v) {
  if (trim(v.name).empty()) throw SchemaError("field 'name' is empty");
  if (trim(v.unit_phrase).empty()) throw SchemaError("field 'unit_phrase' is empty");
  if (!find_entity_kind(v.plural_entity_phrase) || v.plural_entity_phrase == "years")
    throw SchemaError("field 'plural_entity_phrase': unknown entity kind '" +
                      v.plural_entity_phrase + "'");
  if (!(v.min >= 0)) throw SchemaError("field 'min' must be >= 0");
  if (v.min > v.max) throw SchemaError("field 'min' exceeds field 'max'");
  if (v.max > kMaxValue) throw SchemaError("field 'max' exceeds 3.5e15");
  if (v.kind == ValueKind::percentage && v.max > 100)
    throw SchemaError("field 'max' exceeds 100 for a percentage indicator");
}

std::vector<IndicatorVariable> parse_corpus(std::string_view text) {
  std::vector<IndicatorVariable> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '|');
    if (fields.size() != 6)
      throw SchemaError("expected 6 '|'-separated fields, found " +
                            std::to_string(fields.size()),
                        line_no);
    try {
      IndicatorVariable v;
      v.name = trim(fields[0]);
      v.unit_phrase = trim(fields[1]);
      v.plural_entity_phrase = trim(fields[2]);
      auto lo = parse_number(fields[3]);
      auto hi = parse_number(fields[4]);
      if (!lo) throw SchemaError("field 'min' is not a number");
      if (!hi) throw SchemaError("field 'max' is not a number");
      v.min = *lo;
      v.max = *hi;
      v.kind = value_kind_from_string(trim(fields[5]));
      validate(v);
      out.push_back(std::move(v));
    } catch (const SchemaError& e) {
      throw SchemaError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<IndicatorVariable> load_corpus(const std::string& path) {
  return parse_corpus(read_file(path));
}

std::string_view default_corpus_text() { return embedded::corpus_txt; }

const std::vector<IndicatorVariable>& default_corpus() {
  static const std::vector<IndicatorVariable> c = parse_corpus(default_corpus_text());
  return c;
}

std::vector<std::string> check_plot_data(const PlotData& d) {
  std::vector<std::string> v;
  const int nx = static_cast<int>(d.x_categories.size());
  const int ns = static_cast<int>(d.series.size());
  if (nx < kMinCategories || nx > kMaxCategories) v.push_back("x-category count out of range");
  if (ns < kMinSeries || ns > kMaxSeries) v.push_back("series count out of range");
  std::set<std::string> xs(d.x_categories.begin(), d.x_categories.end());
  if (static_cast<int>(xs.size()) != nx) v.push_back("duplicate x-category");
  std::set<std::string> labels;
  for (const auto& s : d.series) {
    labels.insert(s.legend_label);
    if (static_cast<int>(s.values.size()) != nx)
      v.push_back("series '" + s.legend_label + "' length mismatch");
    for (double x : s.values) {
      if (!std::isfinite(x) || x < d.indicator.min || x > d.indicator.max) {
        v.push_back("value out of indicator range in series '" + s.legend_label + "'");
        break;
      }
    }
  }
  if (static_cast<int>(labels.size()) != ns) v.push_back("duplicate legend label");
  return v;
}

namespace {

std::vector<std::string> pick_distinct(const std::vector<std::string>& pool, int n,
                                       Rng& rng) {
  std::vector<std::string> copy = pool;
  rng.shuffle(copy);
  copy.resize(static_cast<size_t>(n));
  return copy;
}

double round_for_kind(double v, ValueKind kind) {
  switch (kind) {
    case ValueKind::integer: return std::round(v);
    case ValueKind::percentage: return std::round(v * 100) / 100;
    case ValueKind::floating:
      return std::fabs(v) < 1e4 ? std::round(v * 100) / 100 : std::round(v);
  }
  return v;
}

}  // namespace

PlotData sample_plot_data(const std::vector<IndicatorVariable>& corpus, uint64_t seed) {
  if (corpus.empty()) throw Error("sample_plot_data: empty corpus");
  Rng rng(seed);
  PlotData d;
  d.indicator = corpus[rng.next() % corpus.size()];
  const auto& ind = d.indicator;
  const EntityKind* entities = find_entity_kind(ind.plural_entity_phrase);
  if (!entities) throw SchemaError("unknown entity kind " + ind.plural_entity_phrase);

  int nx = rng.uniform_int(kMinCategories, kMaxCategories);
  int ns = rng.uniform_int(kMinSeries, kMaxSeries);
  const bool x_is_years = rng.bernoulli(0.5);
  const int pool = static_cast<int>(entities->names.size());
  if (x_is_years) ns = std::min(ns, pool);
  else nx = std::min(nx, pool);
  d.y_label = capitalize(ind.unit_phrase);

  std::vector<std::string> legend;
  std::string context;  // entity or year named in a single-series title
  if (x_is_years) {
    d.x_label = "Year";
    d.x_plural = "years";
    d.x_singular = "year";
    const int start = rng.uniform_int(kFirstYear, kLastYear + 1 - nx);
    for (int i = 0; i < nx; ++i) d.x_categories.push_back(std::to_string(start + i));
    auto names = pick_distinct(entities->names, std::max(ns, 1), rng);
    if (ns >= 2) legend = names; else context = names[0];
  } else {
    d.x_label = capitalize(entities->singular);
    d.x_plural = entities->plural;
    d.x_singular = entities->singular;
    d.x_categories = pick_distinct(entities->names, nx, rng);
    auto years = pick_distinct(years_kind().names, std::max(ns, 1), rng);
    std::sort(years.begin(), years.end());
    if (ns >= 2) legend = years; else context = years[0];
  }
  if (ns == 1) {
    legend = {d.y_label};
    d.title = d.y_label + " in " + context;
  } else {
    d.title = d.y_label + " across " + d.x_plural;
  }

  // Values: uniform over narrow ranges; for wide ranges a plot-level
  // magnitude is drawn log-uniformly and values spread below it.
  const double lo = ind.min, hi = ind.max;
  const double lo_eff = lo > 0 ? lo : hi * 1e-4;
  const bool wide = ind.kind != ValueKind::percentage && hi > 0 && hi / lo_eff > 100;
  double magnitude = hi;
  if (wide) {
    const double a = std::log(lo_eff * 10), b = std::log(hi);
    magnitude = std::exp(rng.uniform(std::min(a, b), b));
  }
  const bool allow_zero = lo == 0 && ind.kind != ValueKind::floating;
  for (const auto& label : legend) {
    Series s;
    s.legend_label = label;
    for (int i = 0; i < nx; ++i) {
      double v = wide ? magnitude * rng.uniform(0.1, 1.0) : rng.uniform(lo, hi);
      if (allow_zero && rng.bernoulli(0.03)) v = 0;
      v = std::clamp(round_for_kind(v, ind.kind), lo, hi);
      s.values.push_back(v);
    }
    d.series.push_back(std::move(s));
  }
  return d;
}

}  // namespace plotqa::corpus
